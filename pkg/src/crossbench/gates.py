"""Fixed single-qubit preparation states and reference matrices.

Spectator qubits are prepared in one of the six cardinal states of the Bloch
sphere, so that crosstalk is visible regardless of which axis it rotates
about.  Preparation uses only X, H, S and Sdg; un-preparation is the same
sequence inverted and reversed, which returns the qubit to |0> before
measurement when the body of the circuit composes to the identity.
"""

from __future__ import annotations

import enum

import numpy as np


class PrepState(enum.Enum):
    Z0 = "Z0"
    Z1 = "Z1"
    XP = "Xp"
    XM = "Xm"
    YP = "Yp"
    YM = "Ym"


#: Gate names applied left-to-right to |0> to prepare each state.
PREP_SEQUENCES: dict[PrepState, tuple[str, ...]] = {
    PrepState.Z0: (),
    PrepState.Z1: ("X",),
    PrepState.XP: ("H",),
    PrepState.XM: ("X", "H"),
    PrepState.YP: ("H", "S"),
    PrepState.YM: ("H", "Sdg"),
}

_INVERSE = {"X": "X", "H": "H", "S": "Sdg", "Sdg": "S"}

#: Circuit-file spellings of the preparation gates.
PREP_EMIT_NAMES = {"X": "x", "H": "h", "S": "s", "Sdg": "sdg"}

_MATRICES = {
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "H": np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2),
    "S": np.array([[1, 0], [0, 1j]], dtype=complex),
    "Sdg": np.array([[1, 0], [0, -1j]], dtype=complex),
}


def prep_sequence(state: PrepState) -> tuple[str, ...]:
    return PREP_SEQUENCES[state]


def unprep_sequence(state: PrepState) -> tuple[str, ...]:
    """Inverse gates in reverse order."""
    return tuple(_INVERSE[g] for g in reversed(PREP_SEQUENCES[state]))


def prep_matrix(state: PrepState) -> np.ndarray:
    return _compose(prep_sequence(state))


def unprep_matrix(state: PrepState) -> np.ndarray:
    return _compose(unprep_sequence(state))


def _compose(names: tuple[str, ...]) -> np.ndarray:
    out = np.eye(2, dtype=complex)
    for name in names:  # applied left-to-right, so each new gate multiplies on the left
        out = _MATRICES[name] @ out
    return out


def parse_prep_states(text: str) -> tuple[PrepState, ...]:
    """Parse a comma-separated state list such as "Z0,Xp,Ym"."""
    out = []
    for token in text.split(","):
        token = token.strip()
        if not token:
            continue
        try:
            out.append(PrepState(token))
        except ValueError:
            valid = ",".join(s.value for s in PrepState)
            raise ValueError(f"unknown preparation state {token!r} (valid: {valid})") from None
    if not out:
        raise ValueError("no preparation states given")
    return tuple(out)
