import logging
from typing import Dict, List, Optional, Set, Tuple

from complexes import BoundedComplex
from lattice import Line

logger = logging.getLogger(__name__)


class ComplexValidator:
    """Re-validates a loaded complex against the lattice predicates"""

    def __init__(self, check_closure: bool = True, check_full: bool = True):
        self.check_closure = check_closure
        self.check_full = check_full

    def validate_complex(self, X: BoundedComplex, max_dim: Optional[int] = None) -> Tuple[bool, List[str]]:
        """
        Check a complex read back from a file or the cache

        Args:
            X: the complex
            max_dim: dimension the complex was truncated at, if any

        Returns:
            (is_valid, issues) where issues names every offending simplex
        """
        issues = []
        spec = X.spec
        for line in X.vertices:
            if line.sup_norm() > spec.ball:
                issues.append(f"vertex {line.rep} lies outside ball {spec.ball}")

        for s in X.all_simplices():
            if not spec.contains(s):
                issues.append(f"{[l.rep for l in s.lines]} fails the {spec.variant.value} predicate")
            if self.check_closure and len(s) > 1:
                for line in s.lines:
                    face = s.without((line,))
                    if not X.contains(face):
                        issues.append(f"face {[l.rep for l in face.lines]} of {[l.rep for l in s.lines]} is missing")

        if self.check_full:
            top = spec.top_dim if max_dim is None else min(max_dim, spec.top_dim)
            issues.extend(self._missing_simplices(X, top))

        if issues:
            logger.warning(f"{X.label}: {len(issues)} validation issues")
        return not issues, issues

    @staticmethod
    def _missing_simplices(X: BoundedComplex, top: int) -> List[str]:
        """
        Simplices on the vertex set that satisfy the predicate but are absent

        A smallest absent simplex t is found as s + v with s = t minus its last line,
        so only extensions of present simplices by a later vertex are tried.
        Above dimension 1 the new vertex must already share an edge with every line of s.
        """
        spec = X.spec
        vertices = sorted(X.vertices)
        position = {v: i for i, v in enumerate(vertices)}
        neighbors: Dict[Line, Set[Line]] = {v: set() for v in vertices}
        for edge in (X.simplices[1] if X.dimension >= 1 else ()):
            a, b = edge.lines
            if a in neighbors and b in neighbors:
                neighbors[a].add(b)
                neighbors[b].add(a)

        missing = []
        for s in X.all_simplices():
            if s.dim + 1 > top or any(line not in position for line in s.lines):
                continue
            later = vertices[position[s.lines[-1]] + 1:]
            if s.dim >= 1:
                common = set.intersection(*(neighbors[l] for l in s.lines))
                later = [v for v in later if v in common]
            for v in later:
                candidate = s.with_lines([v])
                if spec.contains(candidate) and not X.contains(candidate):
                    missing.append(f"{[l.rep for l in candidate.lines]} satisfies the predicate but is missing")
        return missing
