"""Whole-population attainment rates from rates for the population aged 15+.

Children are classified from enrollment ratios: ages 0-4 have no schooling,
ages 5-9 are in incomplete primary at the primary enrollment ratio, and
ages 10-14 split into a primary-only sub-group and a sub-group old enough
to have started secondary school.
"""

from dataclasses import dataclass

import numpy as np

from .gengamma import AttainmentData

AGE_GROUPS = ("0-4", "5-9", "10-14", "15+")


@dataclass(frozen=True)
class AgeAdjustInputs:
    conditional_rates: AttainmentData
    age_shares: tuple
    primary_enrollment: float
    secondary_enrollment: float
    school_entry_age: float = 6.0
    primary_duration: float = 6.0

    def __post_init__(self):
        shares = np.asarray(self.age_shares, dtype=float)
        object.__setattr__(self, "age_shares", tuple(shares.tolist()))
        if shares.shape != (4,):
            raise ValueError("age_shares must have four entries (0-4, 5-9, 10-14, 15+)")
        if np.any(shares < 0) or abs(shares.sum() - 1.0) > 1e-9:
            raise ValueError("age_shares must be nonnegative and sum to 1")
        for name in ("primary_enrollment", "secondary_enrollment"):
            val = getattr(self, name)
            if not 0.0 <= val <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {val}")
        if self.school_entry_age + self.primary_duration > 15:
            raise ValueError(
                "school entry age plus primary duration exceeds 15 "
                f"({self.school_entry_age} + {self.primary_duration})"
            )


def primary_only_fraction(entry_age, primary_duration):
    """Share of the 10-14 group too young to have reached secondary school.

    Ages are uniform on [10, 15), so the share below the cutoff
    ``entry_age + primary_duration`` is ``(cutoff - 10) / 5``.
    """
    return float(np.clip((entry_age + primary_duration - 10.0) / 5.0, 0.0, 1.0))


def _level_index(labels, name):
    try:
        return labels.index(name)
    except ValueError:
        raise ValueError(f"attainment data lacks level {name!r}") from None


def child_level_masses(labels, primary_enrollment, secondary_enrollment, primary_only):
    """Per-level probability masses for the three child age groups.

    Returns an array of shape (3, len(labels)) for groups 0-4, 5-9, 10-14.
    """
    ns = _level_index(labels, "NS")
    pi = _level_index(labels, "PI")
    si = _level_index(labels, "SI")
    e1, e2 = primary_enrollment, secondary_enrollment
    masses = np.zeros((3, len(labels)))
    masses[0, ns] = 1.0
    masses[1, pi] = e1
    masses[1, ns] = 1.0 - e1
    not_secondary = primary_only + (1.0 - primary_only) * (1.0 - e2)
    masses[2, si] = (1.0 - primary_only) * e2
    masses[2, pi] = not_secondary * e1
    masses[2, ns] = not_secondary * (1.0 - e1)
    return masses


def unconditional_rates(inputs):
    """Mix the four age groups by the law of total probability.

    Rates stay in the cumulative-with-tail convention of
    :class:`AttainmentData`; only the 15+ group carries tail mass.
    """
    cond = inputs.conditional_rates
    labels = cond.labels
    primary_only = primary_only_fraction(inputs.school_entry_age, inputs.primary_duration)
    masses = child_level_masses(labels, inputs.primary_enrollment,
                                inputs.secondary_enrollment, primary_only)
    child_cum = np.cumsum(masses, axis=1)
    child_cum[:, -1] = 0.0  # children never reach the censored top level

    w = inputs.age_shares
    rates = np.asarray(cond.rates, dtype=float) * w[3]
    for k in range(3):
        rates = rates + w[k] * child_cum[k]
    rates = np.minimum(rates, 1.0)
    return AttainmentData(labels, cond.durations, tuple(rates.tolist()))
