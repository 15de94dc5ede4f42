"""System availability for the six case-study topologies.

Every polynomial takes an array whose last axis indexes subsystems, so a
whole population of availability vectors can be evaluated at once. Terms are
written in expanded form and keep the subsystem numbering (1-based in the
names, 0-based in the array).

Two published polynomials are not coherent structure functions as printed.
The bridge (CS3) has the path term ``A2 A4 A5`` where the network needs
``A2 A3 A5``, and the sixth term of CS6 closes a parenthesis too early, so the
all-failed vertex evaluates to 1. The corrected forms are used for
evaluation; the printed forms remain available as ``printed_cs3`` and
``printed_cs6`` so the discrepancy can be reproduced.
"""

from __future__ import annotations

import enum
import functools
import itertools

import numpy as np

__all__ = [
    "CaseStudy",
    "InvalidInput",
    "TranscriptionError",
    "system_availability",
    "structure_predicate",
    "enumeration_availability",
    "printed_cs3",
    "printed_cs6",
]

VERTEX_TOL = 1e-9


class InvalidInput(ValueError):
    pass


class TranscriptionError(ArithmeticError):
    """A polynomial evaluated to something other than 0 or 1 at a vertex."""


class CaseStudy(str, enum.Enum):
    CS1 = "CS1"
    CS2 = "CS2"
    CS3 = "CS3"
    CS4 = "CS4"
    CS5 = "CS5"
    CS6 = "CS6"

    @property
    def m(self) -> int:
        return _SIZES[self]

    @classmethod
    def parse(cls, value) -> "CaseStudy":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).upper())
        except ValueError:
            raise InvalidInput(f"unknown case study {value!r}") from None


_SIZES = {
    CaseStudy.CS1: 5,
    CaseStudy.CS2: 5,
    CaseStudy.CS3: 5,
    CaseStudy.CS4: 10,
    CaseStudy.CS5: 10,
    CaseStudy.CS6: 15,
}


def _split(A, m):
    A = [A[..., i] for i in range(m)]
    U = [1.0 - a for a in A]
    return A, U


def _series(A):
    return np.prod(A, axis=-1)


def _cs2(A):
    (A1, A2, A3, A4, A5), _ = _split(A, 5)
    return 1 - (1 - A1 * A2) * (1 - (A3 + A4 - A3 * A4) * A5)


def _cs3(A):
    (A1, A2, A3, A4, A5), _ = _split(A, 5)
    return (
        A1 * A2 + A3 * A4 + A1 * A4 * A5 + A2 * A3 * A5
        - A1 * A2 * A3 * A4 - A1 * A2 * A3 * A5 - A1 * A2 * A4 * A5
        - A1 * A3 * A4 * A5 - A2 * A3 * A4 * A5
        + 2 * A1 * A2 * A3 * A4 * A5
    )


def printed_cs3(A):
    """Bridge polynomial exactly as published (not a coherent structure)."""
    A = np.asarray(A, dtype=float)
    (A1, A2, A3, A4, A5), _ = _split(A, 5)
    return (
        A1 * A2 + A3 * A4 + A1 * A4 * A5 + A2 * A4 * A5
        - A1 * A2 * A3 * A4 - A1 * A2 * A3 * A5 - A1 * A2 * A4 * A5
        - A1 * A3 * A4 * A5 - A2 * A3 * A4 * A5
        + 2 * A1 * A2 * A3 * A4 * A5
    )


def _cs5(A):
    (A1, A2, A3, A4, A5, A6, A7, A8, A9, A10), (U1, U2, U3, U4, U5, U6, U7, U8, U9, U10) = _split(A, 10)
    return (
        A1 * A2 * A3 * A4
        + A1 * A2 * A6 * A10 * (U3 + A3 * U4)
        + A1 * A5 * A9 * A10 * (U2 + A2 * U3 * U6 + A2 * A3 * U4 * U6)
        + A7 * A8 * A9 * A10 * (U1 + A1 * U2 * U5 + A1 * A2 * U3 * U5 * U6 + A1 * A2 * A3 * U5 * U6 * U4)
        + A2 * A3 * A4 * A5 * A7 * A8 * U1 * (U9 + A9 * U10)
        + U1 * A3 * A4 * A6 * A7 * A8 * A9 * U10 * (U2 + A2 * U5)
        + A1 * U2 * A3 * A4 * A6 * A7 * A8 * A9 * U10
        + A1 * U2 * A3 * A4 * A5 * A6 * A9 * U10 * (U7 + A7 * U8)
        + U1 * A2 * A5 * A6 * A7 * A8 * U9 * A10 * (U3 + A3 * U4)
    )


def _cs6_terms(A, corrected: bool):
    (A1, A2, A3, A4, A5, A6, A7, A8, A9, A10, A11, A12, A13, A14, A15), (
        U1, U2, U3, U4, U5, U6, U7, U8, U9, U10, U11, U12, U13, U14, U15
    ) = _split(A, 15)
    if corrected:
        sixth = (
            (U5 + A5 * U6)
            * ((U7 + A7 * U11 + A7 * A11 * U12) * (U9 + A9 * U10) + A9 * A10 * (U11 + A11 * U12))
            * A1 * A2 * A3 * A4 * A8 * A13 * A14 * A15
        )
    else:
        sixth = (U5 + A5 * U6) * (
            (U7 + A7 * U11 + A7 * A11 * U12) * (U9 + A9 * U10)
            + A9 * A10 * (U11 + A11 * U12) * A1 * A2 * A3 * A4 * A8 * A13 * A14 * A15
        )
    return (
        A1 * A2 * A3 * A4 * A5 * A6
        + A9 * A10 * A11 * A12 * A13 * A14 * A15
        * (U1 + A1 * U2 + A1 * A2 * U3 + A1 * A2 * A3 * U4 + A1 * A2 * A3 * A4 * U5 + A1 * A2 * A3 * A4 * A5 * U6)
        + A3 * A4 * A5 * A6 * A7 * A9 * A10
        * (U11 + A11 * U12 + A11 * A12 * U13 + A11 * A12 * A13 * U14 + A11 * A12 * A13 * A14 * U15)
        * (U1 + A1 * U2)
        + ((U1 + A1 * U2) * (U3 + A3 * U4 + A3 * A4 * U7) + A1 * A2 * U7 * (U3 + A3 * U4))
        * (U13 + A13 * U14 + A13 * A14 * U15)
        * A5 * A6 * A8 * A9 * A10 * A11 * A12
        + A1 * A2 * A5 * A6 * A7 * A8 * A11 * A12 * (A9 * A10 + U9 + A9 * U10)
        * (U3 + A3 * U4) * (U13 + A13 * U14 + A13 * A14 * U15)
        + sixth
        + A1 * A2 * A7 * A11 * A12 * A13 * A14 * A15 * (U9 + A9 * U10)
        * (U3 + A3 * U4 + A3 * A4 * U5 + A3 * A4 * A5 * U6)
        + A3 * A4 * A7 * A8 * A9 * A10 * A13 * A14 * A15
        * (U1 + A1 * U2) * (U11 + A11 * U12) * (U5 + A5 * U6)
    )


def _cs6(A):
    return _cs6_terms(A, corrected=True)


def printed_cs6(A):
    """CS6 polynomial exactly as published (evaluates to 1 with every subsystem down)."""
    return _cs6_terms(np.asarray(A, dtype=float), corrected=False)


_POLYNOMIALS = {
    CaseStudy.CS1: _series,
    CaseStudy.CS2: _cs2,
    CaseStudy.CS3: _cs3,
    CaseStudy.CS4: _series,
    CaseStudy.CS5: _cs5,
    CaseStudy.CS6: _cs6,
}


def _as_vector(case: CaseStudy, values) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim == 0 or arr.shape[-1] != case.m:
        raise InvalidInput(f"{case.value} needs {case.m} subsystem values, got shape {arr.shape}")
    return arr


def system_availability(case, availabilities):
    """System availability from per-subsystem availabilities.

    ``availabilities`` may be a single length-``m`` vector or any array whose
    last axis has length ``m``; the result has the leading shape.
    """
    case = CaseStudy.parse(case)
    A = _as_vector(case, availabilities)
    out = _POLYNOMIALS[case](A)
    return float(out) if np.ndim(out) == 0 else out


def _check_vertex_value(case, value, where):
    if abs(value) <= VERTEX_TOL:
        return False
    if abs(value - 1.0) <= VERTEX_TOL:
        return True
    raise TranscriptionError(f"{case.value} polynomial evaluates to {value!r} at vertex {where}")


def structure_predicate(case, x) -> bool:
    """True iff the system works when exactly the subsystems marked 1 work."""
    case = CaseStudy.parse(case)
    x = _as_vector(case, x)
    if x.ndim != 1 or not np.all((x == 0) | (x == 1)):
        raise InvalidInput("structure_predicate needs a single binary vector")
    return _check_vertex_value(case, float(_POLYNOMIALS[case](x)), tuple(int(v) for v in x))


@functools.lru_cache(maxsize=None)
def _vertex_table(case: CaseStudy):
    vertices = np.array(list(itertools.product((0.0, 1.0), repeat=case.m)))
    values = _POLYNOMIALS[case](vertices)
    up = np.abs(values - 1.0) <= VERTEX_TOL
    down = np.abs(values) <= VERTEX_TOL
    if not np.all(up | down):
        bad = int(np.flatnonzero(~(up | down))[0])
        raise TranscriptionError(
            f"{case.value} polynomial evaluates to {values[bad]!r} at vertex {vertices[bad].astype(int)}"
        )
    vertices.setflags(write=False)
    up.setflags(write=False)
    return vertices, up


def enumeration_availability(case, availabilities) -> float:
    """System availability by summing vertex probabilities over working vertices.

    Subsystems are independent, so the probability of a vertex is the product
    of ``A_i`` over working subsystems and ``U_i`` over failed ones.
    """
    case = CaseStudy.parse(case)
    A = _as_vector(case, availabilities)
    if A.ndim != 1:
        raise InvalidInput("enumeration_availability takes one availability vector")
    vertices, up = _vertex_table(case)
    working = vertices[up].astype(bool)
    probs = np.where(working, A, 1.0 - A).prod(axis=1)
    return float(probs.sum())
