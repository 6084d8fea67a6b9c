"""Fuzzy similarity matrices over categorical domains.

A similarity matrix assigns every pair of domain labels a degree in [0, 1];
it must be reflexive and symmetric on construction, and max-min transitive
before it can be turned into a partition tree.  Alpha levels originate from
decimal text and are compared with an absolute tolerance of 1e-9; they are
never combined arithmetically here.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .errors import (
    DuplicateLabel,
    MalformedInput,
    NotReflexive,
    NotSymmetric,
    NotTransitive,
    ValueOutOfRange,
)

ALPHA_TOLERANCE = 1e-9


def check_label(text: str, context: str = "label") -> str:
    """Validate a domain label: non-empty, trimmed, no commas or newlines."""
    if not isinstance(text, str) or not text:
        raise MalformedInput(f"{context}: label must be a non-empty string")
    if text != text.strip():
        raise MalformedInput(
            f"{context}: label {text!r} has leading or trailing whitespace"
        )
    if "," in text or "\n" in text or "\r" in text:
        raise MalformedInput(
            f"{context}: label {text!r} contains a comma or newline"
        )
    return text


def _check_labels(labels: tuple[str, ...]) -> None:
    seen = set()
    for label in labels:
        check_label(label)
        if label in seen:
            raise DuplicateLabel(f"duplicate label {label!r}")
        seen.add(label)


@dataclass(frozen=True)
class SimilarityMatrix:
    """Square matrix of pairwise similarity degrees over an ordered domain."""

    labels: tuple[str, ...]
    values: tuple[tuple[float, ...], ...]

    def __post_init__(self) -> None:
        n = len(self.labels)
        if n == 0:
            raise MalformedInput("similarity matrix needs at least one label")
        _check_labels(self.labels)
        if len(self.values) != n:
            raise MalformedInput(
                f"matrix has {len(self.values)} rows, expected {n}"
            )
        for i, row in enumerate(self.values):
            if len(row) != n:
                raise MalformedInput(
                    f"row {self.labels[i]!r} has {len(row)} values, expected {n}"
                )
        for i, row in enumerate(self.values):
            for j, v in enumerate(row):
                if not (0.0 <= v <= 1.0):
                    raise ValueOutOfRange(
                        f"s({self.labels[i]}, {self.labels[j]}) = {v!r} "
                        f"outside [0, 1]"
                    )
        for i in range(n):
            if self.values[i][i] != 1.0:
                raise NotReflexive(
                    f"s({self.labels[i]}, {self.labels[i]}) = "
                    f"{self.values[i][i]!r}, diagonal must be 1.0"
                )
        for i in range(n):
            for j in range(i + 1, n):
                if self.values[i][j] != self.values[j][i]:
                    raise NotSymmetric(
                        f"s({self.labels[j]}, {self.labels[i]}) = "
                        f"{self.values[j][i]!r} does not match "
                        f"s({self.labels[i]}, {self.labels[j]}) = "
                        f"{self.values[i][j]!r}"
                    )

    @cached_property
    def index(self) -> dict[str, int]:
        return {label: i for i, label in enumerate(self.labels)}

    def __len__(self) -> int:
        return len(self.labels)

    def value(self, x: str, y: str) -> float:
        return self.values[self.index[x]][self.index[y]]


@dataclass(frozen=True)
class TransitivityViolation:
    """A triple (x, via, y) with s(x, y) < min(s(x, via), s(via, y))."""

    x: str
    via: str
    y: str
    s_xy: float
    s_x_via: float
    s_via_y: float

    def describe(self) -> str:
        return (
            f"({self.x}, {self.via}, {self.y}): {self.s_xy!r} < "
            f"min({self.s_x_via!r}, {self.s_via_y!r})"
        )


@dataclass(frozen=True)
class TransitivityReport:
    violations: tuple[TransitivityViolation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def check_max_min_transitivity(m: SimilarityMatrix) -> TransitivityReport:
    """Exhaustively check s(x, y) >= min(s(x, via), s(via, y)) for all triples.

    Returns a report rather than raising: validation tooling wants the full
    list of violating triples, not just the first.
    """
    n = len(m)
    v = m.values
    violations = []
    for i in range(n):
        for j in range(n):
            for k in range(n):
                bound = min(v[i][j], v[j][k])
                if v[i][k] < bound - ALPHA_TOLERANCE:
                    violations.append(
                        TransitivityViolation(
                            m.labels[i], m.labels[j], m.labels[k],
                            v[i][k], v[i][j], v[j][k],
                        )
                    )
    return TransitivityReport(tuple(violations))


def distinct_levels(m: SimilarityMatrix) -> list[float]:
    """All distinct similarity degrees in the matrix, ascending.

    Values within 1e-9 of each other collapse to one level (the largest of
    the group, so the reflexive 1.0 always survives verbatim).
    """
    levels: list[float] = []
    for v in sorted(v for row in m.values for v in row):
        if levels and v <= levels[-1] + ALPHA_TOLERANCE:
            levels[-1] = max(levels[-1], v)
        else:
            levels.append(v)
    return levels


def alpha_cut(m: SimilarityMatrix, alpha: float) -> list[frozenset[str]]:
    """Partition the domain by the crisp relation {(x, y): s(x, y) >= alpha}.

    Classes are the connected components of the threshold graph, returned in
    order of first label occurrence with members in domain order.  For a
    max-min transitive matrix every component is a clique; otherwise the cut
    is not an equivalence relation and NotTransitive is raised.
    """
    n = len(m)
    v = m.values
    threshold = alpha - ALPHA_TOLERANCE
    assigned = [-1] * n
    classes: list[list[int]] = []
    for start in range(n):
        if assigned[start] >= 0:
            continue
        component = [start]
        assigned[start] = len(classes)
        frontier = [start]
        while frontier:
            i = frontier.pop()
            for j in range(n):
                if assigned[j] < 0 and v[i][j] >= threshold:
                    assigned[j] = len(classes)
                    component.append(j)
                    frontier.append(j)
        component.sort()
        classes.append(component)
    for component in classes:
        for a in component:
            for b in component:
                if v[a][b] < threshold:
                    raise NotTransitive(
                        f"alpha-cut at {alpha!r} is not transitive: "
                        f"{m.labels[a]!r} and {m.labels[b]!r} are connected "
                        f"but s = {v[a][b]!r}"
                    )
    return [frozenset(m.labels[i] for i in c) for c in classes]


def parse_similarity_matrix(text: str) -> SimilarityMatrix:
    """Parse the similarity CSV format.

    First non-comment line: an empty cell, then the comma-separated labels.
    Each following line: a label, then n decimal values.  Lines starting
    with '#' are comments; blank lines are ignored.
    """
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        rows.append((lineno, [cell.strip() for cell in line.split(",")]))
    if not rows:
        raise MalformedInput("no header row found")
    header_line, header = rows[0]
    if header[0] != "":
        raise MalformedInput(
            f"line {header_line}: header must start with an empty cell"
        )
    labels = tuple(
        check_label(cell, f"line {header_line}") for cell in header[1:]
    )
    if not labels:
        raise MalformedInput(f"line {header_line}: header has no labels")
    _check_labels(labels)
    n = len(labels)
    if len(rows) - 1 != n:
        raise MalformedInput(
            f"expected {n} data rows, found {len(rows) - 1}"
        )
    values = []
    for i, (lineno, cells) in enumerate(rows[1:]):
        row_label = check_label(cells[0], f"line {lineno}")
        if row_label != labels[i]:
            raise MalformedInput(
                f"line {lineno}: row label {row_label!r} does not match "
                f"header label {labels[i]!r}"
            )
        if len(cells) - 1 != n:
            raise MalformedInput(
                f"line {lineno}: row {row_label!r} has {len(cells) - 1} "
                f"values, expected {n}"
            )
        row = []
        for j, cell in enumerate(cells[1:]):
            try:
                v = float(cell)
            except ValueError:
                raise MalformedInput(
                    f"line {lineno}: cell ({row_label}, {labels[j]}) "
                    f"is not a decimal: {cell!r}"
                ) from None
            row.append(v)
        values.append(tuple(row))
    return SimilarityMatrix(labels, tuple(values))


def format_similarity_matrix(m: SimilarityMatrix) -> str:
    """Inverse of parse_similarity_matrix (canonical: no comments)."""
    lines = ["," + ",".join(m.labels)]
    for label, row in zip(m.labels, m.values):
        lines.append(label + "," + ",".join(repr(v) for v in row))
    return "\n".join(lines) + "\n"
