"""Exact moment tensors of polytopes.

The rank-r moment tensor of a body K is (1/r!) times the integral over K of
the r-th symmetric power of the position vector.  In the monomial basis its
coefficient at a multi-index alpha is the integral of x^alpha over K divided
by alpha!.  Each triangulation cell is handled by mapping the standard
simplex onto it and expanding the pulled-back monomial, whose terms integrate
in closed form: the integral of u^beta over the standard n-simplex is
prod(beta_i!) / (n + |beta|)!.

Everything here is exact rational arithmetic; there is no quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import linalg
from .errors import GeometryError
from .polytope import Polytope
from .symtensor import MultiIndex, SymTensor, sym_product, vector_power

UPoly = dict[tuple[int, ...], Fraction]


def _dirichlet_weight(n: int, beta: tuple[int, ...]) -> Fraction:
    num = 1
    for b in beta:
        num *= math.factorial(b)
    return Fraction(num, math.factorial(n + sum(beta)))


def _mul_affine(poly: UPoly, const: Fraction, lin: Sequence[Fraction]) -> UPoly:
    """Multiply a u-polynomial by the affine form const + sum lin_k u_k."""
    out: UPoly = {}
    for key, c in poly.items():
        if const != 0:
            out[key] = out.get(key, Fraction(0)) + c * const
        for k, a in enumerate(lin):
            if a != 0:
                kk = key[:k] + (key[k] + 1,) + key[k + 1:]
                out[kk] = out.get(kk, Fraction(0)) + c * a
    return out


def _cell_monomial_integrals(
        base: Sequence[Fraction], edges: Sequence[Sequence[Fraction]],
        r: int) -> dict[MultiIndex, Fraction]:
    """Integrals of x^alpha for all |alpha| = r over the simplex
    base + conv(0, edges...), without the |det| factor.

    Expands iteratively: the polynomial for alpha is the one for
    alpha - e_i times the affine coordinate form x_i(u).
    """
    n = len(base)
    nvars = len(edges)
    forms = [
        (base[i], [edges[k][i] for k in range(nvars)]) for i in range(n)]
    zero_key = (0,) * nvars
    polys: dict[MultiIndex, UPoly] = {(0,) * n: {zero_key: Fraction(1)}}
    frontier = [(0,) * n]
    for _ in range(r):
        new_frontier = []
        for alpha in frontier:
            for i in range(n):
                succ = alpha[:i] + (alpha[i] + 1,) + alpha[i + 1:]
                if succ in polys:
                    continue
                const, lin = forms[i]
                polys[succ] = _mul_affine(polys[alpha], const, lin)
                new_frontier.append(succ)
        frontier = new_frontier
    out = {}
    for alpha in frontier:
        total = Fraction(0)
        for beta, c in polys[alpha].items():
            total += c * _dirichlet_weight(nvars, beta)
        out[alpha] = total
    return out


def monomial_integral_simplex(s: Polytope, alpha: Sequence[int]) -> Fraction:
    """Exact integral of x^alpha over a full-dimensional simplex."""
    alpha = tuple(int(a) for a in alpha)
    n = s.dim
    if len(alpha) != n:
        raise GeometryError(f"multi-index of length {len(alpha)} in R^{n}")
    if len(s.vertices) != n + 1:
        raise GeometryError("monomial integral needs an n-simplex")
    base = s.vertices[0]
    edges = [tuple(a - b for a, b in zip(v, base)) for v in s.vertices[1:]]
    d = abs(linalg.det(edges))
    if d == 0:
        raise GeometryError("degenerate simplex")
    integrals = _cell_monomial_integrals(base, edges, sum(alpha))
    return d * integrals[alpha]


@dataclass(frozen=True)
class MomentResult:
    tensor: SymTensor
    body: Polytope
    rank: int


def moment_tensor(k: Polytope, r: int) -> MomentResult:
    """Rank-r moment tensor of a triangulated polytope, exact.

    Lower-dimensional bodies integrate to zero.  Rank 0 is the volume.
    """
    if r < 0:
        raise ValueError("moment tensor rank must be non-negative")
    if k.triangulation is None:
        raise GeometryError("moment tensor needs a triangulation")
    n = k.dim
    pts = k.points
    totals: dict[MultiIndex, Fraction] = {}
    for cell in k.triangulation:
        if len(cell) != n + 1:
            continue
        base = pts[cell[0]]
        edges = [tuple(a - b for a, b in zip(pts[i], base)) for i in cell[1:]]
        d = abs(linalg.det(edges))
        if d == 0:
            continue
        for alpha, val in _cell_monomial_integrals(base, edges, r).items():
            totals[alpha] = totals.get(alpha, Fraction(0)) + d * val
    coeffs: dict[MultiIndex, Fraction] = {}
    for alpha, val in totals.items():
        fact = 1
        for a in alpha:
            fact *= math.factorial(a)
        key = alpha if r > 0 else ()
        coeffs[key] = val / fact
    return MomentResult(SymTensor(n, r, coeffs), k, r)


def covariance_expansion(k: Polytope, y: Sequence, r: int) -> SymTensor:
    """Right-hand side of the translation-covariance expansion: the sum over
    j of M^(r-j)(K) sym-times y^j / j!."""
    y = tuple(linalg.frac(v) for v in y)
    total = SymTensor.zero(k.dim, r)
    for j in range(r + 1):
        lower = moment_tensor(k, r - j).tensor
        shift = vector_power(y, j).scale(Fraction(1, math.factorial(j)))
        total = total + sym_product(lower, shift)
    return total
