"""Random unitaries and random states (seeded, numpy Generator based)."""
import numpy as np

from .states import DensityMatrix, from_ket


def haar_unitary(d, rng) -> np.ndarray:
    """Haar-distributed ``d x d`` unitary: QR of a complex Ginibre matrix with
    the phases of R's diagonal folded back into Q."""
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def random_ket(dim, rng) -> np.ndarray:
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def random_pure(n, d, rng) -> DensityMatrix:
    return from_ket(random_ket(d ** n, rng), n, d)


def random_mixed(n, d, rng, rank=None) -> DensityMatrix:
    """Random mixed state ``G G^dag / Tr`` with ``G`` a ``d^n x rank`` Ginibre matrix."""
    dim = d ** n
    rank = dim if rank is None else rank
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    m = g @ g.conj().T
    return DensityMatrix(n, d, m / np.trace(m).real)


def random_local_unitary(n, d, rng) -> np.ndarray:
    u = np.ones((1, 1), dtype=complex)
    for _ in range(n):
        u = np.kron(u, haar_unitary(d, rng))
    return u


def permute_parties(rho: DensityMatrix, order) -> DensityMatrix:
    """Reorder tensor factors: new party ``i`` is old party ``order[i]`` (1-based)."""
    n, d = rho.n, rho.d
    perm = [p - 1 for p in order]
    t = rho.data.reshape((d,) * (2 * n)).transpose(perm + [n + p for p in perm])
    return DensityMatrix(n, d, t.reshape(rho.dim, rho.dim))


def random_biseparable(n, d, rng, terms=3) -> DensityMatrix:
    """Mixture of pure states, each a product across its own random bipartition."""
    acc = np.zeros((d ** n, d ** n), dtype=complex)
    weights = rng.dirichlet(np.ones(terms))
    for w in weights:
        k1 = int(rng.integers(1, n))
        psi = np.kron(random_ket(d ** k1, rng), random_ket(d ** (n - k1), rng))
        rho = from_ket(psi, n, d)
        order = list(rng.permutation(n) + 1)
        acc += w * permute_parties(rho, order).data
    return DensityMatrix(n, d, acc)
