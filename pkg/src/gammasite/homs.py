"""Morphisms out of the sphere and out of S of a pointed monoid."""
from __future__ import annotations

from .families import SMAlgebra, sphere
from .gamma_core import PointedMap, SAlgebraMorphism, require_enumerable, validate_morphism
from .structures import monoid_homs


class HomConstructionError(AssertionError):
    pass


def hom_from_sphere(X, top: int | None = None) -> list[tuple]:
    """Pairs (a, x_a) for a in level 1 of X, with x_a the transformation S -> X
    sending the point j of level k to X(1 -> k, 1 |-> j)(a).

    Each x_a is checked for naturality and for evaluating to a at the unit.
    """
    require_enumerable(X)
    top = X.truncation if top is None else top
    S = sphere(top)
    out = []
    for a in X.level(1):
        def fn(s, k, a=a):
            return X.base(k) if s[1] == 0 else X.act(PointedMap.point(k, s[1]), a)

        phi = SAlgebraMorphism(S, X, fn, name=f"x_{X.format(a)}")
        bad = validate_morphism(phi, top, multiplicative=False)
        if bad:
            raise HomConstructionError(f"x_{X.format(a)} is not natural: {bad[0]}")
        if phi(S.one, 1) != a:
            raise HomConstructionError("evaluation at the unit does not recover a")
        out.append((a, phi))
    return out


def hom_SM_to_A(M, A, top: int | None = None) -> list[tuple[dict, SAlgebraMorphism]]:
    """Monoid homomorphisms psi: M -> level 1 of A, each with its extension to S[M] -> A.

    The extension sends (u, i) at level k to A(1 -> k, 1 |-> i)(psi(u)); it is
    validated as a unital multiplicative natural transformation.
    """
    require_enumerable(A)
    top = A.truncation if top is None else top
    SMa = SMAlgebra(M, top)
    homs = monoid_homs(M, A.level(1), A.base(1), A.one, A.mul1)
    out = []
    for psi in homs:
        def fn(s, k, psi=psi):
            u, i = s
            return A.base(k) if i == 0 else A.act(PointedMap.point(k, i), psi[u])

        phi = SAlgebraMorphism(SMa, A, fn, name="psi~")
        bad = validate_morphism(phi, top)
        if bad:
            raise HomConstructionError(f"extension of {psi} fails: {bad[0]}")
        out.append((psi, phi))
    return out
