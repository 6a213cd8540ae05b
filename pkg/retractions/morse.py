"""r(⟨v⟩) = |F(v)|, R(φ) and the four-component PL Morse value of a simplex."""
from collections import defaultdict
from typing import Callable, Dict, Iterable, List, NamedTuple, Optional, Sequence

from lattice import Line, LineSetSimplex, SimplexKind, classify


class MorseValue(NamedTuple):
    """Compared lexicographically like any tuple."""
    max_r: int
    count: int
    case: int
    neg_dim: int


def r_value(line: Line, F: Sequence[int]) -> int:
    return abs(sum(a * b for a, b in zip(F, line.rep)))


def r_max(lines: Iterable[Line], F: Sequence[int]) -> int:
    """R over a vertex set; 0 for the empty set."""
    return max((r_value(line, F) for line in lines), default=0)


def last_coordinate_r(line: Line) -> int:
    return abs(line.rep[-1])


def pl_morse(s: LineSetSimplex, r: Optional[Callable[[Line], int]] = None) -> MorseValue:
    r = r or last_coordinate_r
    values = {line: r(line) for line in s.lines}
    top = max(values.values())
    count = sum(1 for value in values.values() if value == top)
    kind = classify(s)
    if kind.is_additive and count == 1:
        case = -2
    elif kind.kind is SimplexKind.INTERNALLY_ADDITIVE and sum(values[l] == top for l in kind.core) == 2:
        case = -1
    elif kind.kind is SimplexKind.STANDARD:
        case = 0
    else:
        case = 1
    return MorseValue(top, count, case, -s.dim)


def morse_profile(simplices: Iterable[LineSetSimplex], r: Optional[Callable[[Line], int]] = None) -> Dict[MorseValue, List[LineSetSimplex]]:
    """Simplices grouped by Morse value, in increasing order of value."""
    groups: Dict[MorseValue, List[LineSetSimplex]] = defaultdict(list)
    for s in simplices:
        groups[pl_morse(s, r)].append(s)
    return dict(sorted(groups.items()))
