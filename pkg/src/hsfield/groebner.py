"""Buchberger's algorithm and ideal membership over F_q.

Pairs are processed in normal-selection order (smallest lcm first) with
Buchberger's coprime criterion.  The number of S-pairs reduced is capped; the
cap raises :class:`BudgetExceeded` rather than looping on hard inputs.
"""

from __future__ import annotations

from typing import Sequence

from .errors import BudgetExceeded
from .poly import DEFAULT_ORDER, MultiPoly, order_key, poly_divmod

DEFAULT_MAX_PAIRS = 10**5


def _lcm_exps(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _reduce(f: MultiPoly, basis: Sequence[MultiPoly], order) -> MultiPoly:
    if not basis or f.is_zero():
        return f
    return poly_divmod(f, basis, order)[1]


def s_polynomial(f: MultiPoly, g: MultiPoly, order=DEFAULT_ORDER) -> MultiPoly:
    F = f.field
    ef, cf = f.leading_term(order)
    eg, cg = g.leading_term(order)
    L = _lcm_exps(ef, eg)
    a = f.mul_term(tuple(x - y for x, y in zip(L, ef)), F.inv(cf))
    b = g.mul_term(tuple(x - y for x, y in zip(L, eg)), F.inv(cg))
    return a - b


def reduce_basis(basis: Sequence[MultiPoly], order=DEFAULT_ORDER) -> list[MultiPoly]:
    """Turn a Gröbner basis into the reduced one (monic, inter-reduced, sorted)."""
    key = order_key(order)
    gs = [g.monic(order) for g in basis if not g.is_zero()]
    # drop elements whose leading term is divisible by another's
    minimal: list[MultiPoly] = []
    leads = [g.leading_term(order)[0] for g in gs]
    for i, g in enumerate(gs):
        li = leads[i]
        redundant = False
        for j, lj in enumerate(leads):
            if j == i:
                continue
            if all(x >= y for x, y in zip(li, lj)) and (li != lj or j < i):
                redundant = True
                break
        if not redundant:
            minimal.append(g)
    out = []
    for i, g in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1 :]
        out.append(_reduce(g, others, order).monic(order) if others else g)
    out.sort(key=lambda g: key(g.leading_term(order)[0]))
    return out


def buchberger(
    generators: Sequence[MultiPoly], order=DEFAULT_ORDER, max_pairs: int = DEFAULT_MAX_PAIRS
) -> list[MultiPoly]:
    """Reduced Gröbner basis of the ideal generated by ``generators``."""
    key = order_key(order)
    G = [g.monic(order) for g in generators if not g.is_zero()]
    if not G:
        return []
    if any(g.is_constant() for g in G):
        return [MultiPoly.one(G[0].field, G[0].nvars)]
    leads = [g.leading_term(order)[0] for g in G]
    pairs = [(i, j) for j in range(len(G)) for i in range(j)]
    processed = 0
    while pairs:
        pairs.sort(key=lambda ij: key(_lcm_exps(leads[ij[0]], leads[ij[1]])), reverse=True)
        i, j = pairs.pop()
        li, lj = leads[i], leads[j]
        if all(x == 0 or y == 0 for x, y in zip(li, lj)):
            continue  # coprime leading terms reduce to zero
        processed += 1
        if processed > max_pairs:
            raise BudgetExceeded(f"Buchberger exceeded {max_pairs} S-pairs")
        r = _reduce(s_polynomial(G[i], G[j], order), G, order)
        if r.is_zero():
            continue
        r = r.monic(order)
        if r.is_constant():
            return [MultiPoly.one(r.field, r.nvars)]
        G.append(r)
        leads.append(r.leading_term(order)[0])
        n = len(G) - 1
        pairs.extend((k, n) for k in range(n))
    return reduce_basis(G, order)


def ideal_membership(f: MultiPoly, basis: Sequence[MultiPoly], order=DEFAULT_ORDER) -> bool:
    """Whether f reduces to zero modulo a Gröbner basis."""
    if f.is_zero():
        return True
    if not basis:
        return False
    return _reduce(f, basis, order).is_zero()


def in_ideal(f: MultiPoly, generators: Sequence[MultiPoly], order=DEFAULT_ORDER, max_pairs=DEFAULT_MAX_PAIRS) -> bool:
    return ideal_membership(f, buchberger(generators, order, max_pairs), order)


def radical_membership(
    f: MultiPoly, generators: Sequence[MultiPoly], order=DEFAULT_ORDER, max_pairs: int = DEFAULT_MAX_PAIRS
) -> bool:
    """Whether f lies in the radical of the ideal (Rabinowitsch trick).

    f is in rad(I) iff 1 lies in I + (1 - y f) with a fresh variable y.
    """
    if f.is_zero():
        return True
    n = f.nvars
    pos = list(range(n))
    gens = [g.embed(n + 1, pos) for g in generators]
    y = MultiPoly.variable(f.field, n + 1, n)
    gens.append(MultiPoly.one(f.field, n + 1) - y * f.embed(n + 1, pos))
    basis = buchberger(gens, order, max_pairs)
    return len(basis) == 1 and basis[0].is_one()
