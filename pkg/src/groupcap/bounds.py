"""Lower and upper bounds on the capacity of shifted group codes.

Both bounds are max-min problems over the module weights ``w``:

* lower: ``min_H  A_H / w_H`` over all non-trivial theta-subgroups, with
  ``A_H`` the average of the coset capacities of ``H``;
* upper: ``min_H  B_H / w_H`` over maximal subgroups, with ``B_H`` the best
  coset capacity;

where ``w_H = sum_i (r_i - theta_i) / r_i * w_i``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

from .channel import (
    Channel,
    CosetCapacity,
    coset_capacity,
    first_best,
    is_coset_symmetric,
    shannon_capacity,
    uniform_on,
    mutual_information,
)
from .group import (
    Theta,
    check_theta,
    cosets,
    is_trivial_theta,
    subgroup_members,
    subgroup_order,
    theta_subgroups,
)
from .maxmin import RatioConstraint, maximize_min_ratio

SHANNON_TOL = 1e-9


@dataclass
class SubgroupDiagnostics:
    theta: Theta
    coset_values: list[CosetCapacity]
    averaged: float
    best: float
    coeffs: tuple[float, ...]
    maximal: bool | None = None

    @property
    def optimal(self) -> CosetCapacity:
        """First coset (by representative) attaining ``best`` up to rounding."""
        return first_best(self.coset_values)


class BoundResult(NamedTuple):
    value: float
    weights: tuple[float, ...]
    binding: tuple[Theta, ...]


@dataclass
class BoundsReport:
    lower: float
    upper: float
    lower_weights: tuple[float, ...]
    upper_weights: tuple[float, ...]
    binding_lower: tuple[Theta, ...]
    binding_upper: tuple[Theta, ...]
    diagnostics: list[SubgroupDiagnostics]
    shannon: float
    symmetric: bool
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "shannon": self.shannon,
            "lower_weights": list(self.lower_weights),
            "upper_weights": list(self.upper_weights),
            "binding_lower": [list(t) for t in self.binding_lower],
            "binding_upper": [list(t) for t in self.binding_upper],
            "symmetric": self.symmetric,
            "notes": list(self.notes),
            "subgroups": [
                {
                    "theta": list(d.theta),
                    "coeffs": list(d.coeffs),
                    "averaged": d.averaged,
                    "best": d.best,
                    "maximal": d.maximal,
                    "optimal_coset": list(d.optimal.coset.representative),
                    "cosets": [
                        {"representative": list(c.coset.representative), "value": c.value}
                        for c in d.coset_values
                    ],
                }
                for d in self.diagnostics
            ],
        }


def subgroup_coeffs(group, theta: Theta) -> tuple[float, ...]:
    return tuple((r - t) / r for t, (_, r) in zip(theta, group.rings))


def subgroup_diagnostics(channel: Channel, theta: Theta) -> SubgroupDiagnostics:
    group = channel.group
    theta = check_theta(group, theta)
    if is_trivial_theta(group, theta):
        raise ValueError("the trivial subgroup has w_H = 0 and is excluded")
    values = [coset_capacity(channel, c) for c in cosets(group, theta)]
    share = subgroup_order(group, theta) / group.order
    averaged = sum(share * v.value for v in values)
    best = max(v.value for v in values)
    return SubgroupDiagnostics(theta, values, averaged, best, subgroup_coeffs(group, theta))


def all_diagnostics(channel: Channel, tol: float = 1e-9) -> list[SubgroupDiagnostics]:
    diags = [subgroup_diagnostics(channel, t) for t in theta_subgroups(channel.group)]
    maximal = set(_maximal_from(diags, tol))
    for d in diags:
        d.maximal = d.theta in maximal
    return diags


def _is_sub(theta_s: Theta, theta_h: Theta) -> bool:
    # S <= H  iff  theta_S >= theta_H componentwise
    return all(s >= h for s, h in zip(theta_s, theta_h))


def _maximal_from(diags, tol: float) -> list[Theta]:
    out = []
    for d in diags:
        if all(d.best >= s.best - tol for s in diags if _is_sub(s.theta, d.theta)):
            out.append(d.theta)
    return out


def maximal_subgroups(channel: Channel, tol: float = 1e-9, diags=None) -> list[Theta]:
    """Non-trivial H whose optimal coset is at least as good as that of every S <= H."""
    diags = all_diagnostics(channel, tol) if diags is None else diags
    return _maximal_from(diags, tol)


def _solve(constraints, dim: int) -> BoundResult:
    sol = maximize_min_ratio(constraints, dim)
    return BoundResult(sol.value, sol.weights, tuple(sol.active))


def lower_bound(channel: Channel, diags=None) -> BoundResult:
    diags = all_diagnostics(channel) if diags is None else diags
    cons = [RatioConstraint(d.theta, d.averaged, d.coeffs) for d in diags]
    return _solve(cons, channel.group.I)


def upper_bound(channel: Channel, tol: float = 1e-9, diags=None) -> BoundResult:
    diags = all_diagnostics(channel, tol) if diags is None else diags
    maximal = set(_maximal_from(diags, tol))
    cons = [RatioConstraint(d.theta, d.best, d.coeffs) for d in diags if d.theta in maximal]
    return _solve(cons, channel.group.I)


def symmetric_capacity(channel: Channel, tol: float = 1e-9) -> float:
    """Closed form for coset-symmetric channels: ``max_w min_H C^U_H / w_H``."""
    if not is_coset_symmetric(channel, tol):
        raise ValueError("channel is not coset-symmetric")
    group = channel.group
    cons = []
    for theta in theta_subgroups(group):
        value = mutual_information(channel, uniform_on(channel, subgroup_members(group, theta)))
        cons.append(RatioConstraint(theta, value, subgroup_coeffs(group, theta)))
    return maximize_min_ratio(cons, group.I).value


def full_report(channel: Channel, tol: float = 1e-9) -> BoundsReport:
    diags = all_diagnostics(channel, tol)
    lo = lower_bound(channel, diags)
    up = upper_bound(channel, tol, diags)
    shannon = shannon_capacity(channel, tol=SHANNON_TOL)
    symmetric = is_coset_symmetric(channel, tol)
    notes = []
    if symmetric:
        notes.append("symmetric = equal coset capacities for every theta-subgroup (numerical test)")
    if not any(d.maximal for d in diags if not any(d.theta)):
        notes.append("G itself is not maximal; the upper bound may exceed the Shannon capacity")
    return BoundsReport(
        lower=lo.value,
        upper=up.value,
        lower_weights=lo.weights,
        upper_weights=up.weights,
        binding_lower=lo.binding,
        binding_upper=up.binding,
        diagnostics=diags,
        shannon=shannon,
        symmetric=symmetric,
        notes=notes,
    )
