"""Finite chain-level model of an integral homology sphere.

A datum consists of named generators carrying a mod-8 grading and a
rational energy lift, together with four structure maps over the Novikov
coefficients: the differential d (degree -1), the degree -4 operator u,
the map d1 into the coefficient field (supported on grading 1) and the
map d2 out of it (landing in grading 4).  Stacking them as

    [[d, 0, 0], [d1, 0, 0], [u, d2, -d]]

gives the extended differential whose square-zero identities every valid
datum must satisfy; validation checks them entry by entry in exact
arithmetic, along with the weight compatibility of every stored exponent.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .novikov import NovikovElement, format_rat, parse_rat


class InputError(ValueError):
    """Malformed user input (bad JSON, schema violation, bad flags)."""


@dataclass(frozen=True)
class Generator:
    name: str
    grading: int          # residue mod 8
    energy_lift: Fraction

    def __post_init__(self):
        if not self.name:
            raise InputError("generator name must be nonempty")
        if not 0 <= self.grading <= 7:
            raise InputError(f"grading of {self.name!r} must be in 0..7")


class LambdaMatrix:
    """Sparse matrix over the Novikov coefficients, indexed by generator names."""

    def __init__(self, entries: dict[tuple[str, str], NovikovElement] | None = None):
        self._by_source: dict[str, dict[str, NovikovElement]] = {}
        for (src, dst), el in (entries or {}).items():
            self.set(src, dst, el)

    def set(self, src: str, dst: str, el: NovikovElement):
        if el.is_zero():
            return
        self._by_source.setdefault(src, {})[dst] = el

    def entry(self, src: str, dst: str) -> NovikovElement:
        return self._by_source.get(src, {}).get(dst, NovikovElement.zero())

    def entries(self):
        for src in sorted(self._by_source):
            row = self._by_source[src]
            for dst in sorted(row):
                yield src, dst, row[dst]

    def is_zero(self) -> bool:
        return not self._by_source

    def apply(self, vec: dict[str, NovikovElement]) -> dict[str, NovikovElement]:
        out: dict[str, NovikovElement] = {}
        for src, coeff in vec.items():
            if coeff.is_zero():
                continue
            for dst, el in self._by_source.get(src, {}).items():
                acc = out.get(dst, NovikovElement.zero()) + coeff * el
                if acc.is_zero():
                    out.pop(dst, None)
                else:
                    out[dst] = acc
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, LambdaMatrix):
            return NotImplemented
        return dict(self.iter_pairs()) == dict(other.iter_pairs())

    def iter_pairs(self):
        for src, dst, el in self.entries():
            yield (src, dst), el


Vector = dict[str, NovikovElement]


def vec_add(a: Vector, b: Vector) -> Vector:
    out = dict(a)
    for g, el in b.items():
        acc = out.get(g, NovikovElement.zero()) + el
        if acc.is_zero():
            out.pop(g, None)
        else:
            out[g] = acc
    return out


def vec_neg(a: Vector) -> Vector:
    return {g: -el for g, el in a.items()}

def vec_sub(a: Vector, b: Vector) -> Vector:
    return vec_add(a, vec_neg(b))


def vec_scale(el: NovikovElement, a: Vector) -> Vector:
    out = {}
    for g, v in a.items():
        w = el * v
        if not w.is_zero():
            out[g] = w
    return out


def vec_is_zero(a: Vector) -> bool:
    return all(el.is_zero() for el in a.values())


class FloerDatum:
    """Generators, gradings, energy lifts and the four structure maps."""

    def __init__(self, name: str, generators: list[Generator],
                 d: LambdaMatrix, u: LambdaMatrix,
                 d1: dict[str, NovikovElement], d2: dict[str, NovikovElement]):
        self.name = name
        self.generators = list(generators)
        self._by_name = {g.name: g for g in generators}
        if len(self._by_name) != len(generators):
            raise InputError("generator names must be unique")
        self.d = d
        self.u = u
        self.d1 = {g: el for g, el in d1.items() if not el.is_zero()}
        self.d2 = {g: el for g, el in d2.items() if not el.is_zero()}
        for m in (d, u):
            for src, dst, _ in m.entries():
                self._require(src)
                self._require(dst)
        for g in list(self.d1) + list(self.d2):
            self._require(g)

    def _require(self, name: str):
        if name not in self._by_name:
            raise InputError(f"unknown generator {name!r} in datum {self.name!r}")

    def generator(self, name: str) -> Generator:
        return self._by_name[name]

    def grading(self, name: str) -> int:
        return self._by_name[name].grading

    def lift(self, name: str) -> Fraction:
        return self._by_name[name].energy_lift

    def names(self) -> list[str]:
        return [g.name for g in self.generators]

    # -- the four maps as functions on chain vectors -----------------------

    def apply_d(self, vec: Vector) -> Vector:
        return self.d.apply(vec)

    def apply_u(self, vec: Vector) -> Vector:
        return self.u.apply(vec)

    def apply_u_power(self, vec: Vector, power: int) -> Vector:
        for _ in range(power):
            vec = self.u.apply(vec)
        return vec

    def apply_d1(self, vec: Vector) -> NovikovElement:
        out = NovikovElement.zero()
        for g, coeff in vec.items():
            el = self.d1.get(g)
            if el is not None:
                out = out + coeff * el
        return out

    def apply_d2(self, lam: NovikovElement) -> Vector:
        out: Vector = {}
        for g, el in self.d2.items():
            w = lam * el
            if not w.is_zero():
                out[g] = w
        return out

    def basis_vector(self, name: str) -> Vector:
        self._require(name)
        return {name: NovikovElement.one()}

    def structurally_equal(self, other: "FloerDatum") -> bool:
        return (
            [(g.name, g.grading, g.energy_lift) for g in self.generators]
            == [(g.name, g.grading, g.energy_lift) for g in other.generators]
            and self.d == other.d
            and self.u == other.u
            and self.d1 == other.d1
            and self.d2 == other.d2
        )


@dataclass(frozen=True)
class HomogeneousVector:
    """Rational combination sum_g s_g l^(shift + r_g) g over one grading residue."""

    coefficients: dict[str, Fraction]
    residue: int
    weight_shift: Fraction

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coefficients.values())

    def to_element(self, datum: FloerDatum) -> Vector:
        out: Vector = {}
        for g, s in self.coefficients.items():
            if s != 0:
                out[g] = NovikovElement.term(s, self.weight_shift + datum.lift(g))
        return out


class Report:
    """Outcome of a verification pass: ok flag plus failure messages."""

    def __init__(self):
        self.failures: list[str] = []

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, message: str):
        self.failures.append(message)

    def merge(self, other: "Report"):
        self.failures.extend(other.failures)

    def __str__(self) -> str:
        return "ok" if self.ok else "; ".join(self.failures)


def verify_tilde_differential(datum: FloerDatum) -> Report:
    """Check the four component identities of the squared extended differential.

    Squaring [[d,0,0],[d1,0,0],[u,d2,-d]] forces, entry by entry:
    d(d(g)) = 0, d1(d(g)) = 0, d(d2(1)) = 0 and
    u(d(g)) - d(u(g)) + d2(d1(g)) = 0 for every generator g.
    """
    rep = Report()
    for g in datum.names():
        basis = datum.basis_vector(g)
        dd = datum.apply_d(datum.apply_d(basis))
        for h, el in sorted(dd.items()):
            rep.fail(f"d∘d != 0 at {g}->{h}: residual {el}")
        d1d = datum.apply_d1(datum.apply_d(basis))
        if not d1d.is_zero():
            rep.fail(f"d1∘d != 0 at {g}: residual {d1d}")
        lhs = vec_add(
            vec_sub(datum.apply_u(datum.apply_d(basis)),
                    datum.apply_d(datum.apply_u(basis))),
            datum.apply_d2(datum.apply_d1(basis)),
        )
        for h, el in sorted(lhs.items()):
            if not el.is_zero():
                rep.fail(f"u∘d - d∘u + d2∘d1 != 0 at {g}->{h}: residual {el}")
    dd2 = datum.apply_d(datum.apply_d2(NovikovElement.one()))
    for h, el in sorted(dd2.items()):
        rep.fail(f"d∘d2 != 0 at ->{h}: residual {el}")
    return rep


def validate_structure(datum: FloerDatum) -> Report:
    """Grading-degree constraints of the four maps, then the square-zero identities."""
    rep = Report()
    for src, dst, _ in datum.d.entries():
        if (datum.grading(src) - 1) % 8 != datum.grading(dst):
            rep.fail(f"d entry {src}->{dst} does not drop grading by 1")
    for src, dst, _ in datum.u.entries():
        if (datum.grading(src) - 4) % 8 != datum.grading(dst):
            rep.fail(f"u entry {src}->{dst} does not drop grading by 4")
    for g in sorted(datum.d1):
        if datum.grading(g) != 1:
            rep.fail(f"d1 supported on {g} of grading {datum.grading(g)} != 1")
    for g in sorted(datum.d2):
        if datum.grading(g) != 4:
            rep.fail(f"d2 lands on {g} of grading {datum.grading(g)} != 4")
    rep.merge(verify_tilde_differential(datum))
    return rep


def validate_homogeneity(datum: FloerDatum) -> Report:
    """Weight compatibility: every stored exponent respects the energy lifts mod 1."""
    rep = Report()

    def congruent(x: Fraction) -> bool:
        return x.denominator == 1

    for src, dst, el in datum.d.entries():
        for _, e in el.items():
            if not congruent(datum.lift(src) + e - datum.lift(dst)):
                rep.fail(f"d entry {src}->{dst}: exponent {e} breaks weight congruence")
    for src, dst, el in datum.u.entries():
        for _, e in el.items():
            if not congruent(datum.lift(src) + e - datum.lift(dst)):
                rep.fail(f"u entry {src}->{dst}: exponent {e} breaks weight congruence")
    for g in sorted(datum.d1):
        for _, e in datum.d1[g].items():
            if not congruent(datum.lift(g) + e):
                rep.fail(f"d1 entry at {g}: exponent {e} breaks weight congruence")
    for g in sorted(datum.d2):
        for _, e in datum.d2[g].items():
            if not congruent(e - datum.lift(g)):
                rep.fail(f"d2 entry at {g}: exponent {e} breaks weight congruence")
    return rep


def validate(datum: FloerDatum) -> Report:
    rep = validate_structure(datum)
    rep.merge(validate_homogeneity(datum))
    return rep


def project_homogeneous(datum: FloerDatum, element: Vector,
                        weight_shift: Fraction, residue: int) -> HomogeneousVector:
    """Projection onto homogeneous vectors of the given weight.

    For a generator g of the matching grading residue, only the
    coefficient of l^(weight_shift + r_g) survives.
    """
    weight_shift = Fraction(weight_shift)
    coeffs: dict[str, Fraction] = {}
    for g, el in element.items():
        if datum.grading(g) % 8 != residue % 8:
            continue
        c = el.coefficient(weight_shift + datum.lift(g))
        if c != 0:
            coeffs[g] = c
    return HomogeneousVector(coeffs, residue % 8, weight_shift)


# ---------------------------------------------------------------------------
# JSON datum format
# ---------------------------------------------------------------------------

def _check_keys(obj: dict, allowed: set[str], where: str):
    unknown = set(obj) - allowed
    if unknown:
        raise InputError(f"unknown key {sorted(unknown)[0]!r} in {where}")


def _terms_from_json(items, where: str) -> NovikovElement:
    terms = []
    if not isinstance(items, list):
        raise InputError(f"{where}: terms must be an array")
    for t in items:
        if not isinstance(t, dict):
            raise InputError(f"{where}: term must be an object")
        _check_keys(t, {"coeff", "exp"}, where)
        try:
            terms.append((parse_rat(t["coeff"]), parse_rat(t["exp"])))
        except KeyError as exc:
            raise InputError(f"{where}: term missing {exc.args[0]!r}") from exc
        except ValueError as exc:
            raise InputError(f"{where}: {exc}") from exc
    return NovikovElement(terms)


def _terms_to_json(el: NovikovElement) -> list[dict]:
    return [{"coeff": format_rat(c), "exp": format_rat(e)} for c, e in el.items()]


def datum_from_json(obj: dict) -> FloerDatum:
    if not isinstance(obj, dict):
        raise InputError("datum must be a JSON object")
    _check_keys(obj, {"name", "generators", "d", "u", "d1", "d2"}, "datum")
    try:
        name = obj["name"]
        gen_objs = obj["generators"]
    except KeyError as exc:
        raise InputError(f"datum missing key {exc.args[0]!r}") from exc
    if not isinstance(name, str):
        raise InputError("datum name must be a string")
    generators = []
    for g in gen_objs:
        _check_keys(g, {"name", "grading", "energy_lift"}, "generator")
        try:
            grading = g["grading"]
            if not isinstance(grading, int) or isinstance(grading, bool):
                raise InputError("grading must be an integer")
            generators.append(
                Generator(g["name"], grading, parse_rat(g["energy_lift"]))
            )
        except KeyError as exc:
            raise InputError(f"generator missing key {exc.args[0]!r}") from exc
        except ValueError as exc:
            raise InputError(str(exc)) from exc

    def matrix(key: str) -> LambdaMatrix:
        mat = LambdaMatrix()
        for e in obj.get(key, []):
            _check_keys(e, {"from", "to", "terms"}, f"{key} entry")
            try:
                mat.set(e["from"], e["to"], _terms_from_json(e["terms"], key))
            except KeyError as exc:
                raise InputError(f"{key} entry missing key {exc.args[0]!r}") from exc
        return mat

    def lam_map(key: str, end: str) -> dict[str, NovikovElement]:
        out = {}
        for e in obj.get(key, []):
            _check_keys(e, {end, "terms"}, f"{key} entry")
            try:
                out[e[end]] = _terms_from_json(e["terms"], key)
            except KeyError as exc:
                raise InputError(f"{key} entry missing key {exc.args[0]!r}") from exc
        return out

    return FloerDatum(name, generators, matrix("d"), matrix("u"),
                      lam_map("d1", "from"), lam_map("d2", "to"))


def datum_to_json(datum: FloerDatum) -> dict:
    return {
        "name": datum.name,
        "generators": [
            {"name": g.name, "grading": g.grading,
             "energy_lift": format_rat(g.energy_lift)}
            for g in datum.generators
        ],
        "d": [{"from": s, "to": t, "terms": _terms_to_json(el)}
              for s, t, el in datum.d.entries()],
        "u": [{"from": s, "to": t, "terms": _terms_to_json(el)}
              for s, t, el in datum.u.entries()],
        "d1": [{"from": g, "terms": _terms_to_json(el)}
               for g, el in sorted(datum.d1.items())],
        "d2": [{"to": g, "terms": _terms_to_json(el)}
               for g, el in sorted(datum.d2.items())],
    }


def fixture_path(name: str) -> Path | None:
    base = resources.files("floergamma") / "fixtures" / f"{name}.json"
    try:
        with resources.as_file(base) as p:
            return p if p.exists() else None
    except FileNotFoundError:
        return None


def load_datum(path_or_name: str) -> FloerDatum:
    """Load a datum from a JSON file path or a bundled fixture name."""
    p = Path(path_or_name)
    if not p.exists():
        fixture = fixture_path(p.stem if p.suffix == ".json" else path_or_name)
        if fixture is None:
            raise InputError(f"no such datum file or fixture: {path_or_name}")
        p = fixture
    try:
        obj = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON in {p}: {exc}") from exc
    return datum_from_json(obj)
