"""Reader for ``.model`` files.

A model file is line oriented.  ``#`` starts a comment, ``[section]``
headers switch sections, and every other line is ``key: value``::

    name: d8-hyperbolic
    description: abelian d8 with a hyperbolic form

    [algebra]
    basis: u1 u2 u3 u4 v1 v2 v3 v4
    bracket: H Xp = 2*Xp        # [H, Xp] = 2 Xp; [Xp, H] is filled in
    form: u1 v1 = 1             # symmetric; unlisted entries are 0

    [subalgebra]
    span: v1                    # one spanning vector per line
    span: 1/2*H + Xp

    [grading]                   # optional
    degree: Xp = 1              # unlisted basis elements have degree 0
    element: 1/2*H

    [chart]
    coordinates: x1 x2 x3 x4
    transversal: u1             # one per coordinate, in order

    [gauge]                     # optional; defaults to A_i = X_i
    x2: u2 + x1*x3*v1

    [curvature]                 # optional; switches to synthetic mode
    x1 x2: x3*v1

    [control]                   # optional negative-control switches
    corrupt: drop-nabla-term

Vectors and sections are written as polynomials in the coordinates and
basis names that are linear in the basis names.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .cartan import CartanModel
from .exactpoly import Poly, PolyParseError, parse_poly
from .exactpoly.poly import unpack
from .liealg import GradingSpec, LieAlgebraSpec, SubalgebraSpec, validate_grading, validate_quadratic
from .report import Report

SECTIONS = ("", "algebra", "subalgebra", "grading", "chart", "gauge", "curvature", "control")
CORRUPTIONS = ("drop-nabla-term", "flip-jacobiator-sign", "double-l3")


class ModelFileError(ValueError):
    def __init__(self, message: str, path: str = "", line: int = 0, column: int | None = None):
        where = f"{path}:{line}" if path else f"line {line}"
        if column is not None:
            where += f":{column}"
        super().__init__(f"{where}: {message}")
        self.path = path
        self.line = line
        self.column = column


class ModelValidationError(ValueError):
    def __init__(self, report: Report):
        failed = report.failures()
        first = failed[0] if failed else None
        msg = "model failed validation"
        if first is not None:
            msg += f": {first.name}"
            if first.witness:
                msg += " " + ", ".join(f"{k}={v}" for k, v in first.witness.items())
        super().__init__(msg)
        self.report = report


@dataclass
class ModelSpecFile:
    name: str
    description: str
    algebra: LieAlgebraSpec
    subalgebra: SubalgebraSpec
    model: CartanModel
    grading: GradingSpec | None = None
    corrupt: str | None = None
    path: str = ""
    raw: dict = field(default_factory=dict, repr=False)


def _linear_in_basis(poly: Poly, coords: tuple[str, ...], basis: tuple[str, ...]) -> list[Poly]:
    """Split a polynomial in ``coords + basis`` into basis components."""
    n, d = len(coords), len(basis)
    comps: list[dict] = [dict() for _ in range(d)]
    for key, c in poly.terms.items():
        exps = unpack(key, n + d)
        bexp = exps[n:]
        if sum(bexp) != 1:
            raise ValueError("expression must be linear in the basis elements")
        k = bexp.index(1)
        sub = 0
        for i, e in enumerate(exps[:n]):
            sub |= e << (16 * i)
        comps[k][sub] = c
    return [Poly(coords, t) for t in comps]


class _Reader:
    def __init__(self, text: str, path: str = ""):
        self.path = path
        self.entries: dict[str, list[tuple[int, str, str]]] = {s: [] for s in SECTIONS}
        section = ""
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line.startswith("["):
                if not line.endswith("]"):
                    raise ModelFileError("unterminated section header", path, lineno)
                section = line[1:-1].strip().lower()
                if section not in SECTIONS:
                    raise ModelFileError(f"unknown section [{section}]", path, lineno)
                continue
            if ":" not in line:
                raise ModelFileError("expected 'key: value'", path, lineno)
            key, value = line.split(":", 1)
            self.entries[section].append((lineno, key.strip(), value.strip()))

    def get(self, section: str, key: str) -> list[tuple[int, str]]:
        return [(ln, v) for ln, k, v in self.entries[section] if k == key]

    def one(self, section: str, key: str, required: bool = True) -> tuple[int, str] | None:
        found = self.get(section, key)
        if not found:
            if required:
                raise ModelFileError(f"missing '{key}' in [{section or 'header'}]", self.path, 0)
            return None
        if len(found) > 1:
            raise ModelFileError(f"'{key}' given more than once", self.path, found[1][0])
        return found[0]

    def error(self, message: str, line: int, column: int | None = None):
        raise ModelFileError(message, self.path, line, column)

    def poly(self, text: str, variables, line: int) -> Poly:
        try:
            return parse_poly(text, variables)
        except PolyParseError as exc:
            self.error(exc.message, line, exc.offset)

    def linear(self, text: str, coords, basis, line: int) -> list[Poly]:
        p = self.poly(text, tuple(coords) + tuple(basis), line)
        try:
            return _linear_in_basis(p, tuple(coords), tuple(basis))
        except ValueError as exc:
            self.error(str(exc), line)


def parse_model(text: str, path: str = "") -> ModelSpecFile:
    r = _Reader(text, path)
    name = (r.one("", "name", required=False) or (0, Path(path).stem if path else ""))[1]
    description = (r.one("", "description", required=False) or (0, ""))[1]

    ln, basis_text = r.one("algebra", "basis")
    basis = tuple(basis_text.split())
    if len(set(basis)) != len(basis):
        r.error("repeated basis name", ln)
    d = len(basis)

    def constant_vector(text: str, line: int) -> list:
        comps = r.linear(text, (), basis, line)
        return [c.constant_term() for c in comps]

    structure = {}
    for ln, text in r.get("algebra", "bracket"):
        lhs, eq, rhs = text.partition("=")
        names = lhs.split()
        if not eq or len(names) != 2:
            r.error("expected 'bracket: A B = expression'", ln)
        for nm in names:
            if nm not in basis:
                r.error(f"unknown basis element {nm!r}", ln)
        i, j = basis.index(names[0]), basis.index(names[1])
        if i == j:
            r.error("bracket of an element with itself is zero", ln)
        out = constant_vector(rhs, ln)
        for k, v in enumerate(out):
            if v:
                structure[(i, j, k)] = structure.get((i, j, k), 0) + v
                structure[(j, i, k)] = structure.get((j, i, k), 0) - v
    for ln, text in r.get("algebra", "constant"):
        # raw structure constant, no antisymmetric fill: 'constant: A B C = value'
        lhs, eq, rhs = text.partition("=")
        names = lhs.split()
        if not eq or len(names) != 3 or any(nm not in basis for nm in names):
            r.error("expected 'constant: A B C = value'", ln)
        i, j, k = (basis.index(nm) for nm in names)
        structure[(i, j, k)] = r.poly(rhs, (), ln).constant_term()

    form = [[0] * d for _ in range(d)]
    for ln, text in r.get("algebra", "form"):
        lhs, eq, rhs = text.partition("=")
        names = lhs.split()
        if not eq or len(names) != 2 or any(nm not in basis for nm in names):
            r.error("expected 'form: A B = value'", ln)
        i, j = basis.index(names[0]), basis.index(names[1])
        v = r.poly(rhs, (), ln).constant_term()
        form[i][j] = v
        form[j][i] = v
    algebra = LieAlgebraSpec(basis, structure, form)

    span = [constant_vector(text, ln) for ln, text in r.get("subalgebra", "span")]
    subalgebra = SubalgebraSpec(algebra, tuple(tuple(v) for v in span))

    grading = None
    if r.entries["grading"]:
        degrees = [0] * d
        for ln, text in r.get("grading", "degree"):
            lhs, eq, rhs = text.partition("=")
            nm = lhs.strip()
            if not eq or nm not in basis:
                r.error("expected 'degree: A = integer'", ln)
            try:
                degrees[basis.index(nm)] = int(rhs.strip())
            except ValueError:
                r.error("degree must be an integer", ln)
        elem = r.one("grading", "element", required=False)
        element = tuple(constant_vector(elem[1], elem[0])) if elem else None
        grading = GradingSpec(algebra, tuple(degrees), element, subalgebra)

    ln, coord_text = r.one("chart", "coordinates")
    coords = tuple(coord_text.split())
    clash = set(coords) & set(basis)
    if clash:
        r.error(f"names used as both coordinates and basis elements: {sorted(clash)}", ln)
    transversal = [constant_vector(text, ln) for ln, text in r.get("chart", "transversal")]
    if len(transversal) != len(coords):
        r.error(f"need {len(coords)} transversal vectors, got {len(transversal)}", ln)

    gauge = [[Poly.constant(coords, x) for x in X] for X in transversal]
    seen = set()
    for ln, key, text in r.entries["gauge"]:
        if key not in coords:
            r.error(f"gauge component for unknown coordinate {key!r}", ln)
        if key in seen:
            r.error(f"gauge component {key!r} given twice", ln)
        seen.add(key)
        gauge[coords.index(key)] = r.linear(text, coords, basis, ln)

    curvature = None
    if r.entries["curvature"]:
        curvature = {}
        for ln, key, text in r.entries["curvature"]:
            pair = key.split()
            if len(pair) != 2 or any(c not in coords for c in pair):
                r.error("expected 'xi xj: section'", ln)
            i, j = coords.index(pair[0]), coords.index(pair[1])
            if i == j:
                r.error("curvature component with repeated coordinate", ln)
            curvature[(i, j)] = r.linear(text, coords, basis, ln)

    corrupt = None
    c = r.one("control", "corrupt", required=False)
    if c is not None:
        if c[1] not in CORRUPTIONS:
            r.error(f"unknown corruption {c[1]!r}", c[0])
        corrupt = c[1]

    try:
        model = CartanModel(
            algebra,
            subalgebra,
            coords,
            transversal,
            gauge,
            curvature,
            name=name,
            grading=grading,
        )
    except ValueError as exc:
        raise ModelFileError(str(exc), path, 0) from exc
    return ModelSpecFile(name, description, algebra, subalgebra, model, grading, corrupt, path)


def validate_model(spec: ModelSpecFile) -> Report:
    rep = Report(f"validation: {spec.name}")
    for c in validate_quadratic(spec.algebra).checks:
        rep.add(c)
    for c in spec.subalgebra.validate().checks:
        rep.add(c)
    if spec.grading is not None:
        for c in validate_grading(spec.grading).checks:
            rep.add(c)
    if all(c.passed for c in rep.checks):
        for c in spec.model.validate().checks:
            rep.add(c)
    return rep


def load_model(path: str | Path, validate: bool = True) -> ModelSpecFile:
    """Parse and validate a model file.

    Raises ModelFileError on syntax problems and ModelValidationError (which
    carries the full report) when the data is inconsistent.
    """
    path = Path(path)
    spec = parse_model(path.read_text(encoding="utf-8"), str(path))
    if validate:
        rep = validate_model(spec)
        if not rep.passed:
            raise ModelValidationError(rep)
    return spec


def bundled_models_dir() -> Path:
    return Path(__file__).parent / "models"


def bundled_model(name: str) -> Path:
    p = bundled_models_dir() / (name if name.endswith(".model") else f"{name}.model")
    if not p.exists():
        raise FileNotFoundError(p)
    return p
