"""Finite Abelian groups in primary decomposition form.

A group is ``Z_{p_1^{r_1}} + ... + Z_{p_I^{r_I}}`` with elements stored as
tuples of residues.  Subgroups are the coordinate ("theta") subgroups
``p_1^{theta_1} R_1 + ... + p_I^{theta_I} R_I`` of that fixed decomposition.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from functools import cached_property

Element = tuple[int, ...]
Theta = tuple[int, ...]

DEFAULT_MAX_ENUM = 4096


class EnumerationCapError(ValueError):
    """Raised when an enumeration would exceed the configured element cap."""


def max_enum() -> int:
    """Enumeration cap, overridable through ``GROUPCAP_MAX_ENUM``."""
    raw = os.environ.get("GROUPCAP_MAX_ENUM")
    if raw is None:
        return DEFAULT_MAX_ENUM
    try:
        cap = int(raw)
    except ValueError as exc:
        raise ValueError(f"GROUPCAP_MAX_ENUM must be an integer, got {raw!r}") from exc
    if cap < 1:
        raise ValueError("GROUPCAP_MAX_ENUM must be positive")
    return cap


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class Group:
    rings: tuple[tuple[int, int], ...]
    order: int = field(init=False)

    def __post_init__(self):
        order = 1
        for p, r in self.rings:
            order *= p**r
        object.__setattr__(self, "order", order)

    @property
    def I(self) -> int:  # noqa: E743
        return len(self.rings)

    @cached_property
    def moduli(self) -> tuple[int, ...]:
        return tuple(p**r for p, r in self.rings)

    @cached_property
    def elements(self) -> tuple[Element, ...]:
        return enumerate_elements(self)

    @cached_property
    def _index(self) -> dict[Element, int]:
        return {g: i for i, g in enumerate(self.elements)}

    def index(self, g: Element) -> int:
        """Position of ``g`` in the lexicographic element order."""
        return self._index[tuple(g)]

    def check(self, g: Element) -> Element:
        g = tuple(int(c) for c in g)
        if len(g) != self.I:
            raise ValueError(f"element {g} has {len(g)} coordinates, group has {self.I}")
        for c, m in zip(g, self.moduli):
            if not 0 <= c < m:
                raise ValueError(f"coordinate {c} out of range for Z_{m}")
        return g

    def __str__(self) -> str:
        return " + ".join(f"Z_{p**r}" for p, r in self.rings)


def make_group(spec) -> Group:
    """Build a group from ``[(p, r), ...]``; rejects non-primes and r < 1."""
    spec = [tuple(item) for item in spec]
    if not spec:
        raise ValueError("group spec must be nonempty")
    rings = []
    for item in spec:
        if len(item) != 2:
            raise ValueError(f"ring spec {item!r} must be a (prime, exponent) pair")
        p, r = item
        if isinstance(p, bool) or isinstance(r, bool) or int(p) != p or int(r) != r:
            raise ValueError(f"ring spec {item!r} must contain integers")
        p, r = int(p), int(r)
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if r < 1:
            raise ValueError(f"exponent {r} must be >= 1")
        rings.append((p, r))
    return Group(tuple(rings))


def zero(group: Group) -> Element:
    return (0,) * group.I


def add(group: Group, a: Element, b: Element) -> Element:
    if len(a) != group.I or len(b) != group.I:
        raise ValueError("dimension mismatch")
    return tuple((x + y) % m for x, y, m in zip(a, b, group.moduli))


def neg(group: Group, a: Element) -> Element:
    if len(a) != group.I:
        raise ValueError("dimension mismatch")
    return tuple((-x) % m for x, m in zip(a, group.moduli))


def sub(group: Group, a: Element, b: Element) -> Element:
    return add(group, a, neg(group, b))


def scalar_mul(group: Group, n: int, g: Element) -> Element:
    if n < 0:
        raise ValueError("scalar must be nonnegative")
    if len(g) != group.I:
        raise ValueError("dimension mismatch")
    return tuple((n * x) % m for x, m in zip(g, group.moduli))


def enumerate_elements(group: Group, cap: int | None = None) -> tuple[Element, ...]:
    """All elements in lexicographic coordinate order (zero first)."""
    cap = max_enum() if cap is None else cap
    if group.order > cap:
        raise EnumerationCapError(f"group order {group.order} exceeds enumeration cap {cap}")
    return tuple(itertools.product(*(range(m) for m in group.moduli)))


def theta_subgroups(group: Group, include_trivial: bool = False) -> list[Theta]:
    thetas = list(itertools.product(*(range(r + 1) for _, r in group.rings)))
    if not include_trivial:
        trivial = tuple(r for _, r in group.rings)
        thetas = [t for t in thetas if t != trivial]
    return thetas


def check_theta(group: Group, theta: Theta) -> Theta:
    theta = tuple(int(t) for t in theta)
    if len(theta) != group.I:
        raise ValueError(f"theta {theta} has wrong length for {group}")
    for t, (_, r) in zip(theta, group.rings):
        if not 0 <= t <= r:
            raise ValueError(f"theta entry {t} outside 0..{r}")
    return theta


def is_trivial_theta(group: Group, theta: Theta) -> bool:
    return all(t == r for t, (_, r) in zip(theta, group.rings))


def subgroup_order(group: Group, theta: Theta) -> int:
    out = 1
    for t, (p, r) in zip(theta, group.rings):
        out *= p ** (r - t)
    return out


def _component_subgroup(p: int, r: int, t: int) -> range:
    return range(0, p**r, p**t)


def subgroup_members(group: Group, theta: Theta) -> frozenset[Element]:
    theta = check_theta(group, theta)
    comps = [_component_subgroup(p, r, t) for (p, r), t in zip(group.rings, theta)]
    return frozenset(itertools.product(*comps))


def in_subgroup(group: Group, theta: Theta, g: Element) -> bool:
    return all(c % (p**t) == 0 for c, t, (p, _) in zip(g, theta, group.rings))


@dataclass(frozen=True)
class Coset:
    theta: Theta
    representative: Element
    members: tuple[Element, ...]

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, g) -> bool:
        return tuple(g) in self.members


def cosets(group: Group, theta: Theta) -> list[Coset]:
    """Cosets of the theta-subgroup, sorted by (lexicographically least) representative."""
    theta = check_theta(group, theta)
    # The least member of g + H has coordinates g_i mod p_i^{theta_i}.
    reps = itertools.product(*(range(p**t) for (p, _), t in zip(group.rings, theta)))
    H = sorted(subgroup_members(group, theta))
    out = []
    for rep in reps:
        members = tuple(sorted(add(group, rep, h) for h in H))
        out.append(Coset(theta, tuple(rep), members))
    out.sort(key=lambda c: c.representative)
    return out


def coset_of(group: Group, theta: Theta, g: Element) -> Coset:
    """The coset of the theta-subgroup containing ``g``."""
    theta = check_theta(group, theta)
    rep = tuple(c % (p**t) for c, t, (p, _) in zip(group.check(g), theta, group.rings))
    H = sorted(subgroup_members(group, theta))
    return Coset(theta, rep, tuple(sorted(add(group, rep, h) for h in H)))


def annihilator_subgroup(group: Group, i: int) -> frozenset[Element]:
    """``{g : p_i^{r_i} g = 0}`` for the 1-based ring index ``i``."""
    if not 1 <= i <= group.I:
        raise IndexError(f"ring index {i} outside 1..{group.I}")
    p_i, r_i = group.rings[i - 1]
    comps = []
    for p, r in group.rings:
        if p != p_i:
            comps.append(range(1))
        elif r <= r_i:
            comps.append(range(p**r))
        else:
            comps.append(range(0, p**r, p ** (r - r_i)))
    return frozenset(itertools.product(*comps))


def ring_embedding(group: Group, i: int) -> tuple[Element, ...]:
    """Elements of ``R_i`` placed in coordinate ``i`` (1-based), zeros elsewhere."""
    if not 1 <= i <= group.I:
        raise IndexError(f"ring index {i} outside 1..{group.I}")
    z = [0] * group.I
    out = []
    for c in range(group.moduli[i - 1]):
        z[i - 1] = c
        out.append(tuple(z))
    return tuple(out)


def permute_rings(group: Group, perm) -> Group:
    """Group with rings reordered so that new ring j is old ring ``perm[j]``."""
    return Group(tuple(group.rings[j] for j in perm))
