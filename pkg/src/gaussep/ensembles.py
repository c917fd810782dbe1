"""Reproducible covariance-matrix generators for tests and the CLI."""

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import DimensionMismatch
from .matrix_kernel import symmetrize
from .symplectic import direct_sum, random_symplectic

__all__ = [
    "EnsembleSpec",
    "thermal_product_sigma",
    "random_bonafide_sigma",
    "tmsv_sigma",
    "tmsv_noisy_sigma",
    "generate_sigmas",
]

KINDS = ("thermal_product", "random_bonafide", "tmsv", "tmsv_noisy")


@dataclass(frozen=True)
class EnsembleSpec:
    """One family of covariance matrices and its parameters."""

    kind: str
    count: int = 1
    seed: int = 0
    nus: Optional[Sequence[float]] = None
    spread: float = 0.5
    r: float = 0.5
    t: float = 0.0
    hbar: float = 1.0

    def validate(self, partition):
        if self.kind not in KINDS:
            raise ValueError("unknown ensemble kind %r" % (self.kind,))
        if self.count < 1:
            raise ValueError("count must be >= 1")
        if self.spread < 0 or self.r < 0 or self.t < 0:
            raise ValueError("spread, r, and t must be >= 0")
        if self.nus is not None:
            if len(self.nus) != partition.n:
                raise DimensionMismatch(
                    "need %d symplectic eigenvalues, got %d"
                    % (partition.n, len(self.nus))
                )
            if min(self.nus) < self.hbar / 2.0:
                raise ValueError("thermal nu below hbar/2 is unphysical")
        if self.kind.startswith("tmsv") and (
            partition.n_A != 1 or partition.n_B != 1
        ):
            raise DimensionMismatch("tmsv kinds are 1+1 mode families")


def _thermal_diag(partition, nus):
    na = partition.n_A
    nu_a = np.asarray(nus[:na], dtype=float)
    nu_b = np.asarray(nus[na:], dtype=float)
    return direct_sum(
        np.diag(np.concatenate([nu_a, nu_a])),
        np.diag(np.concatenate([nu_b, nu_b])),
    )


def thermal_product_sigma(partition, nus, hbar=1.0):
    """Product of thermal modes: diag(nu, nu) per mode, per-subsystem layout.

    The nu values carry the scale; ``hbar`` only matters for validation in
    :class:`EnsembleSpec`.
    """
    if len(nus) != partition.n:
        raise DimensionMismatch(
            "need %d symplectic eigenvalues, got %d" % (partition.n, len(nus))
        )
    return _thermal_diag(partition, nus)


def random_bonafide_sigma(partition, seed, spread=0.5, hbar=1.0, sympl_spread=0.35):
    """Sigma = S diag(nu, nu) S^T with S a random symplectic (with respect to
    the partition form) and nu uniform in [hbar/2, hbar/2 + spread]: bona
    fide by construction.  ``sympl_spread`` scales the conjugation and is
    kept moderate so condition numbers stay sane."""
    rng = np.random.default_rng(seed)
    nus = hbar / 2.0 + spread * rng.random(partition.n)
    r = partition.std_permutation()
    s = r.T @ random_symplectic(partition.n, rng, sympl_spread) @ r
    return symmetrize(s @ _thermal_diag(partition, nus) @ s.T)


def tmsv_sigma(r, hbar=1.0):
    """Two-mode squeezed vacuum covariance, per-subsystem (x, p) ordering:
    (hbar/2) [[cI, sZ], [sZ, cI]] with c = cosh 2r, s = sinh 2r, Z = diag(1, -1)."""
    c = np.cosh(2.0 * r)
    s = np.sinh(2.0 * r)
    eye2 = np.eye(2)
    z = np.diag([1.0, -1.0])
    return 0.5 * hbar * np.block([[c * eye2, s * z], [s * z, c * eye2]])


def tmsv_noisy_sigma(r, t, hbar=1.0):
    """TMSV plus isotropic classical noise t I."""
    return tmsv_sigma(r, hbar) + t * np.eye(4)


def generate_sigmas(spec, partition):
    """Deterministic list of covariance matrices for an EnsembleSpec."""
    spec.validate(partition)
    rng = np.random.default_rng(spec.seed)
    out = []
    for _ in range(spec.count):
        if spec.kind == "thermal_product":
            if spec.nus is not None:
                nus = list(spec.nus)
            else:
                nus = list(spec.hbar / 2.0 + spec.spread * rng.random(partition.n))
            out.append(thermal_product_sigma(partition, nus, spec.hbar))
        elif spec.kind == "random_bonafide":
            out.append(
                random_bonafide_sigma(partition, rng, spec.spread, spec.hbar)
            )
        elif spec.kind == "tmsv":
            out.append(tmsv_sigma(spec.r, spec.hbar))
        else:  # tmsv_noisy
            out.append(tmsv_noisy_sigma(spec.r, spec.t, spec.hbar))
    return out
