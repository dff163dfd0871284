"""Reading and writing the `.bqp` (bound quiver presentation) and `.poset` formats.

`.bqp`, line oriented, `#` starts a comment:

    vertex <name>
    arrow <name> <source> <target>
    bound <m>
    rel <term> ((+|-) <term>)*

with `<term> := [<int>[/<uint>][*]]<arrow>(.<arrow>)*`, read left to right.

`.poset`:

    element <name>
    cover <a> <b>        # a > b
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path as FilePath
import re

from quiverhh_core import ModelError, ParseError, StatusCallback
from quiverhh_poset import Poset
from quiverhh_quiver import Arrow, LinComb, Presentation, Quiver, is_connected, path_from_arrows

_NAME_CHARS = r"[^\s.+\-/*0-9][^\s.+\-/*]*"
_ARROW_NAME = re.compile(_NAME_CHARS + r"\Z")
_TERM = re.compile(
    r"(?:(?P<num>\d+)(?:/(?P<den>\d+))?\*?)?(?P<path>" + _NAME_CHARS + r"(?:\." + _NAME_CHARS + r")*)\Z"
)
_TOKEN = re.compile(r"[+-]|[^\s+-]+")

RawTerm = tuple[Fraction, tuple[str, ...]]


def _strip_comment(raw: str) -> str:
    return raw.split("#", 1)[0].strip()


def _parse_term(token: str, line: int) -> RawTerm:
    match = _TERM.match(token)
    if not match:
        raise ParseError(f"cannot read term {token!r}", line)
    num = int(match.group("num")) if match.group("num") else 1
    den = int(match.group("den")) if match.group("den") else 1
    if den == 0:
        raise ParseError(f"zero denominator in {token!r}", line)
    return Fraction(num, den), tuple(match.group("path").split("."))


def parse_relation_terms(body: str, line: int) -> list[RawTerm]:
    """Split `a.b - 2*c.d + 1/3*e.f` style text into signed terms."""

    tokens = _TOKEN.findall(body)
    if not tokens:
        raise ParseError("empty relation", line)

    terms: list[RawTerm] = []
    position = 0
    sign = 1
    if tokens[0] in {"+", "-"}:
        sign = -1 if tokens[0] == "-" else 1
        position = 1
    while True:
        if position >= len(tokens) or tokens[position] in {"+", "-"}:
            raise ParseError("expected a term", line)
        coefficient, arrows = _parse_term(tokens[position], line)
        terms.append((sign * coefficient, arrows))
        position += 1
        if position == len(tokens):
            return terms
        if tokens[position] not in {"+", "-"}:
            raise ParseError(f"expected + or - before {tokens[position]!r}", line)
        sign = -1 if tokens[position] == "-" else 1
        position += 1


def parse_presentation(text: str, *, on_status: StatusCallback | None = None) -> Presentation:
    vertices: list[tuple[str, int]] = []
    arrows: list[tuple[str, str, str, int]] = []
    bound: tuple[int, int] | None = None
    raw_relations: list[tuple[list[RawTerm], int]] = []

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line:
            continue
        parts = line.split()
        keyword = parts[0]
        if keyword == "vertex":
            if len(parts) != 2:
                raise ParseError("expected: vertex <name>", line_no)
            vertices.append((parts[1], line_no))
        elif keyword == "arrow":
            if len(parts) != 4:
                raise ParseError("expected: arrow <name> <source> <target>", line_no)
            if not _ARROW_NAME.match(parts[1]):
                raise ParseError(f"invalid arrow name {parts[1]!r}", line_no)
            arrows.append((parts[1], parts[2], parts[3], line_no))
        elif keyword == "bound":
            if len(parts) != 2 or not parts[1].isdigit():
                raise ParseError("expected: bound <m>", line_no)
            if bound is not None:
                raise ParseError("duplicate bound line", line_no)
            bound = (int(parts[1]), line_no)
        elif keyword == "rel":
            raw_relations.append((parse_relation_terms(line[len("rel"):], line_no), line_no))
        else:
            raise ParseError(f"unknown keyword {keyword!r}", line_no)

    seen: set[str] = set()
    for name, line_no in vertices:
        if name in seen:
            raise ParseError(f"duplicate vertex {name!r}", line_no)
        seen.add(name)
    if not vertices:
        raise ParseError("no vertices declared")

    arrow_names: set[str] = set()
    for name, source, target, line_no in arrows:
        if name in arrow_names:
            raise ParseError(f"duplicate arrow {name!r}", line_no)
        arrow_names.add(name)
        for endpoint in (source, target):
            if endpoint not in seen:
                raise ParseError(f"unknown vertex {endpoint!r}", line_no)

    if bound is None:
        raise ParseError("missing bound line")
    m, bound_line = bound
    if m < 2:
        raise ParseError("bound must be >= 2", bound_line)

    quiver = Quiver(tuple(n for n, _ in vertices), tuple(Arrow(n, s, t) for n, s, t, _ in arrows))

    relations = []
    for raw_terms, line_no in raw_relations:
        terms = []
        for coefficient, names in raw_terms:
            for name in names:
                if name not in arrow_names:
                    raise ParseError(f"unknown arrow {name!r}", line_no)
            try:
                path = path_from_arrows(quiver, names)
            except ModelError as exc:
                raise ParseError(f"{'.'.join(names)} is not a path", line_no) from exc
            if not 2 <= path.length <= m - 1:
                raise ParseError(f"term length outside [2, {m - 1}]: {path}", line_no)
            terms.append((coefficient, path))
        try:
            relation = LinComb.from_terms(terms)
        except ModelError as exc:
            raise ParseError(str(exc), line_no) from exc
        if relation.is_zero:
            raise ParseError("relation is zero", line_no)
        relations.append(relation)

    if not is_connected(quiver) and on_status:
        on_status("Warning: the quiver is not connected; connectedness hypotheses are not met.")

    return Presentation(quiver, tuple(relations), m)


def serialize_presentation(p: Presentation) -> str:
    lines = [f"vertex {v}" for v in p.quiver.vertices]
    lines += [f"arrow {a.name} {a.source} {a.target}" for a in p.quiver.arrows]
    lines.append(f"bound {p.bound}")
    lines += [f"rel {relation}" for relation in p.relations]
    return "\n".join(lines) + "\n"


def parse_poset(text: str) -> Poset:
    elements: list[str] = []
    covers: list[tuple[str, str, int]] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line:
            continue
        parts = line.split()
        if parts[0] == "element":
            if len(parts) != 2:
                raise ParseError("expected: element <name>", line_no)
            if parts[1] in elements:
                raise ParseError(f"duplicate element {parts[1]!r}", line_no)
            elements.append(parts[1])
        elif parts[0] == "cover":
            if len(parts) != 3:
                raise ParseError("expected: cover <a> <b>", line_no)
            covers.append((parts[1], parts[2], line_no))
        else:
            raise ParseError(f"unknown keyword {parts[0]!r}", line_no)

    if not elements:
        raise ParseError("no elements declared")
    known = set(elements)
    for a, b, line_no in covers:
        for name in (a, b):
            if name not in known:
                raise ParseError(f"unknown element {name!r}", line_no)
        if a == b:
            raise ParseError(f"{a} cannot cover itself", line_no)
    try:
        return Poset.from_relations(elements, [(a, b) for a, b, _ in covers])
    except ModelError as exc:
        raise ParseError(str(exc)) from exc


def serialize_poset(p: Poset) -> str:
    lines = [f"element {name}" for name in p.elements]
    lines += [f"cover {a} {b}" for a, b in p.hasse_edges()]
    return "\n".join(lines) + "\n"


def _read_text(path: FilePath) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"{path} is not valid UTF-8 (byte {exc.start})") from exc


def load_presentation(path: FilePath, *, on_status: StatusCallback | None = None) -> Presentation:
    if on_status:
        on_status(f"Reading {path}")
    return parse_presentation(_read_text(path), on_status=on_status)


def load_poset(path: FilePath, *, on_status: StatusCallback | None = None) -> Poset:
    if on_status:
        on_status(f"Reading {path}")
    return parse_poset(_read_text(path))
