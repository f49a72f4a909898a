"""L-point store: JSON-lines records, ingestion, and landscape statistics.

Every number is kept as the decimal string it was written with, so a record
survives any number of read/write cycles unchanged and its stated precision
travels with it.  One record per line:

    {"gamma_type": "r0c5", "conductor": 1, "sign": ["1", "0"],
     "coordinates": [{"value": "2.5", "digits": null}, {"value": "16.976...", "digits": 13}],
     "coefficients": [{"n": 2, "re": "-0.063424433675", "im": "0.10988282023", "digits": 11}, ...],
     "provenance": {"source": "search", "timestamp": "...", "engine_version": "0.1.0"},
     "status": "verified"}

Coordinates are landscape coordinates of the Gamma-type (see
``spectra.landscape_coordinates``); ``digits`` null marks an exact value.

The CSV compatibility reader takes a header row with the columns
``gamma_type, conductor, x1, x2`` and optionally ``sign_re, sign_im`` and
``re_a{p}, im_a{p}`` for primes p.  Digit counts are read off the number of
decimals.  A column map (dict or JSON file) renames published columns to these.
"""

from __future__ import annotations

import csv
import datetime as _dt
import json
import math
import os
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import mpmath as mp

from . import __version__
from .afe import LPoint
from .coeffmap import to_coefficients
from .measures import coefficient_density3, region_mass
from .spectra import (
    GammaType,
    SpectralPoint,
    enumerate_signatures,
    epsilon_infinity,
    is_admissible,
    landscape_coordinates,
    parse_gamma_type,
    point_from_landscape,
    refined_signature,
)

__all__ = [
    "LPointRecord",
    "StoreSchemaError",
    "RectangleStat",
    "emit",
    "append",
    "ingest",
    "read_csv",
    "record_from_lpoint",
    "rectangle_stats",
    "landscape_density",
    "sym_square_ingest",
    "ModularFormData",
    "MaassFormData",
    "empirical_moments",
    "SOURCES",
]

SOURCES = ("search", "ingest", "oracle")
STATUSES = ("verified", "unverified")


class StoreSchemaError(ValueError):
    """A malformed record; ``line`` is 1-based."""

    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def _decimal(x, digits=None) -> str:
    """Decimal string for an exact or mp value (``digits`` significant after the point)."""
    if isinstance(x, str):
        return x
    if isinstance(x, (int, Fraction)):
        f = Fraction(x)
        if f.denominator == 1:
            return str(f.numerator)
        k = 0
        while k <= 4 * f.denominator.bit_length() and (10 ** k) % f.denominator:
            k += 1
        if (10 ** k) % f.denominator:
            raise ValueError(f"{f} has no finite decimal expansion")
        return _fixed(f, k)
    if digits is None:
        return mp.nstr(mp.mpf(x), mp.mp.dps, min_fixed=-mp.inf, max_fixed=mp.inf)
    return mp.nstr(mp.mpf(x), max(1, digits + max(0, int(mp.floor(mp.log10(abs(x)))) + 1) if x else 1),
                   min_fixed=-mp.inf, max_fixed=mp.inf)


def _fixed(x, decimals: int) -> str:
    """x rounded to ``decimals`` places after the point."""
    if isinstance(x, (int, Fraction)):
        n = round(Fraction(x) * 10 ** decimals)
    else:
        with mp.workdps(decimals + 30):
            n = int(mp.nint(mp.mpf(x) * mp.mpf(10) ** decimals))
    sign = "-" if n < 0 else ""
    n = abs(n)
    if decimals == 0:
        return f"{sign}{n}"
    s = str(n).rjust(decimals + 1, "0")
    return f"{sign}{s[:-decimals]}.{s[-decimals:]}"


def _decimals_of(s: str) -> int:
    s = s.strip().lower()
    if "e" in s:
        mant, exp = s.split("e")
        return max(0, _decimals_of(mant) - int(exp))
    return len(s.split(".")[1]) if "." in s else 0


@dataclass(frozen=True)
class LPointRecord:
    gamma_type: str
    conductor: int
    sign: tuple  # (re, im) decimal strings
    coordinates: tuple  # ((value, digits or None), ...)
    coefficients: tuple  # ((n, re, im, digits), ...) sorted by n
    provenance: tuple  # ((key, value), ...) sorted by key
    status: str = "unverified"

    def __post_init__(self):
        g = parse_gamma_type(self.gamma_type)
        if not is_admissible(g, self.conductor):
            raise ValueError(f"Gamma-type {self.gamma_type} is not admissible at N = {self.conductor}")
        if self.status not in STATUSES:
            raise ValueError(f"status must be one of {STATUSES}")
        src = dict(self.provenance).get("source")
        if src not in SOURCES:
            raise ValueError(f"provenance source must be one of {SOURCES}, got {src!r}")
        for s in self.sign:
            Fraction(s)
        for v, _ in self.coordinates:
            Fraction(v)

    # conversions

    @property
    def gtype(self) -> GammaType:
        return parse_gamma_type(self.gamma_type)

    def spectral_point(self) -> SpectralPoint:
        coords = [Fraction(v) if d is None else mp.mpf(v) for v, d in self.coordinates]
        return point_from_landscape(self.gtype, coords)

    def prime_coefficients(self) -> dict:
        return {n: mp.mpc(mp.mpf(re), mp.mpf(im)) for n, re, im, _ in self.coefficients}

    def to_lpoint(self) -> LPoint:
        sign = mp.mpc(mp.mpf(self.sign[0]), mp.mpf(self.sign[1]))
        digits = {n: d for n, _, _, d in self.coefficients}
        return LPoint(self.spectral_point(), self.prime_coefficients(), self.conductor, sign, digits,
                      dict(self.provenance)["source"])

    def coefficient_point(self):
        with mp.workdps(30):
            return to_coefficients(self.spectral_point())

    def to_dict(self) -> dict:
        return {
            "gamma_type": self.gamma_type,
            "conductor": self.conductor,
            "sign": list(self.sign),
            "coordinates": [{"value": v, "digits": d} for v, d in self.coordinates],
            "coefficients": [{"n": n, "re": re, "im": im, "digits": d} for n, re, im, d in self.coefficients],
            "provenance": dict(self.provenance),
            "status": self.status,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=False)

    @classmethod
    def from_dict(cls, obj: dict, line=None) -> "LPointRecord":
        try:
            coords = tuple((_str(c["value"]), _digits(c.get("digits"))) for c in obj["coordinates"])
            coeffs = tuple(sorted((int(c["n"]), _str(c["re"]), _str(c["im"]), _digits(c.get("digits")))
                                  for c in obj.get("coefficients", [])))
            sign = tuple(_str(s) for s in obj.get("sign", ["1", "0"]))
            if len(sign) != 2:
                raise StoreSchemaError("sign must be [re, im]", line)
            prov = obj.get("provenance", {"source": "ingest"})
            return cls(str(obj["gamma_type"]), int(obj.get("conductor", 1)), sign, coords, coeffs,
                       tuple(sorted((str(k), str(v)) for k, v in prov.items())),
                       obj.get("status", "unverified"))
        except StoreSchemaError:
            raise
        except KeyError as exc:
            raise StoreSchemaError(f"missing field {exc.args[0]!r}", line) from exc
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise StoreSchemaError(str(exc), line) from exc


def _str(v) -> str:
    if not isinstance(v, str):
        raise StoreSchemaError(f"numbers must be decimal strings, got {v!r}")
    Fraction(v)
    return v


def _digits(d):
    if d is None:
        return None
    if isinstance(d, bool) or not isinstance(d, int) or d < 0:
        raise StoreSchemaError(f"digit count must be a nonnegative integer, got {d!r}")
    return d


def _provenance(source: str, timestamp=None):
    ts = timestamp or _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
    return tuple(sorted({"source": source, "timestamp": ts, "engine_version": __version__}.items()))


def record_from_lpoint(L: LPoint, coordinate_digits=None, source=None, status: str = "unverified",
                       timestamp=None) -> LPointRecord:
    """Freeze an LPoint; coefficients are written to their digit counts (default 12)."""
    coords, used_dual = landscape_coordinates(L.point)
    if used_dual:
        raise ValueError("store the landscape representative, not its dual")
    cd = list(coordinate_digits or [None if isinstance(c, Fraction) else 13 for c in coords])
    coordinates = []
    for c, d in zip(coords, cd):
        coordinates.append((_decimal(c) if d is None else _fixed(c, d), d))
    coefficients = []
    for p in sorted(L.coefficients):
        v = L.coefficients[p]
        d = int(L.digits.get(p, 12))
        coefficients.append((p, _fixed(v.real, d), _fixed(v.imag, d), d))
    sign = (_fixed(L.sign.real, 12).rstrip("0").rstrip(".") or "0",
            _fixed(L.sign.imag, 12).rstrip("0").rstrip(".") or "0")
    sign = tuple("0" if s in ("-0", "") else s for s in sign)
    return LPointRecord(format_type(L.point), L.conductor, sign, tuple(coordinates), tuple(coefficients),
                        _provenance(source or L.provenance, timestamp), status)


def format_type(p: SpectralPoint) -> str:
    return str(p.gamma_type)


# reading and writing


def emit(records, path) -> None:
    """Write records as JSON lines (overwrites)."""
    with open(path, "w", encoding="utf-8") as fh:
        for r in records:
            fh.write(r.to_json() + "\n")


def append(record: LPointRecord, path) -> None:
    """Append one record; a single write call keeps concurrent appends line-atomic."""
    data = (record.to_json() + "\n").encode("utf-8")
    fd = os.open(path, os.O_WRONLY | os.O_APPEND | os.O_CREAT, 0o644)
    try:
        os.write(fd, data)
    finally:
        os.close(fd)


def ingest(path, column_map=None, check_box: bool = True) -> list:
    """Read a JSON-lines store, or a CSV file (by ``.csv`` suffix) via ``read_csv``."""
    path = Path(path)
    if path.suffix.lower() == ".csv":
        return read_csv(path, column_map, check_box)
    out = []
    with open(path, encoding="utf-8") as fh:
        for i, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise StoreSchemaError(f"invalid JSON: {exc.msg}", i) from exc
            if not isinstance(obj, dict):
                raise StoreSchemaError("record must be a JSON object", i)
            out.append(_checked(LPointRecord.from_dict(obj, i), i, check_box))
    return out


def _checked(rec: LPointRecord, line, check_box):
    try:
        point = rec.spectral_point()
    except (ValueError, TypeError) as exc:
        raise StoreSchemaError(f"bad coordinates: {exc}", line) from exc
    if not point.is_balanced():
        raise StoreSchemaError("unbalanced spectral parameters", line)
    if check_box:
        bad = [n for n, re, im, _ in rec.coefficients
               if mp.mpf(re) ** 2 + mp.mpf(im) ** 2 > point.degree ** 2]
        if bad:
            warnings.warn(f"line {line}: coefficients outside the Ramanujan box at n = {bad}", stacklevel=3)
    return rec


def _load_column_map(column_map):
    if column_map is None:
        return {}
    if isinstance(column_map, (str, Path)):
        with open(column_map, encoding="utf-8") as fh:
            column_map = json.load(fh)
    return dict(column_map)


def read_csv(path, column_map=None, check_box: bool = True) -> list:
    """Compatibility reader for published tables (see the module docstring)."""
    cmap = _load_column_map(column_map)
    out = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            return []
        rename = {cmap.get(name, name): name for name in reader.fieldnames}
        for field_name in ("gamma_type", "x1", "x2"):
            if field_name not in rename:
                raise StoreSchemaError(f"missing column {field_name!r}", 1)
        for i, row in enumerate(reader, start=2):
            get = lambda k, default=None: (row.get(rename[k]) or default) if k in rename else default
            try:
                coords = []
                gt = parse_gamma_type(get("gamma_type").strip())
                for j, key in enumerate(("x1", "x2")):
                    v = get(key).strip()
                    exact = j == 0 and refined_signature(gt).d_two == 1
                    coords.append({"value": v, "digits": None if exact else _decimals_of(v)})
                coeffs = []
                primes = sorted({int(k[4:]) for k in rename if k.startswith(("re_a", "im_a"))})
                for p in primes:
                    re, im = get(f"re_a{p}", "0").strip(), get(f"im_a{p}", "0").strip()
                    coeffs.append({"n": p, "re": re, "im": im,
                                   "digits": min(_decimals_of(re), _decimals_of(im))})
                N = int(get("conductor", "1"))
                default_sign = epsilon_infinity(gt) if N == 1 else 1
                sign = [get("sign_re", _fmt_int(default_sign.real)).strip(),
                        get("sign_im", _fmt_int(default_sign.imag)).strip()]
                obj = {"gamma_type": str(gt), "conductor": N, "sign": sign, "coordinates": coords,
                       "coefficients": coeffs, "provenance": _csv_provenance(path)}
            except StoreSchemaError:
                raise
            except (ValueError, AttributeError, TypeError) as exc:
                raise StoreSchemaError(str(exc), i) from exc
            out.append(_checked(LPointRecord.from_dict(obj, i), i, check_box))
    return out


def _fmt_int(x) -> str:
    return str(int(round(x)))


def _csv_provenance(path):
    return dict(_provenance("ingest", timestamp=f"file:{Path(path).name}"))


# statistics


@dataclass
class RectangleStat:
    bounds: tuple  # ((c2_lo, c2_hi), (c3_lo, c3_hi))
    count: int  # dual-completed
    raw_count: int
    predicted: float
    predicted_error: float
    ratio: float


def landscape_density(N: int = 1, mode: str = "prime"):
    """Coefficient-space density summed over the degree-3 signatures that carry an
    admissible Gamma-type at conductor N."""
    sigs = []
    for s in enumerate_signatures(3):
        if s.d_two == 0:
            g = GammaType((0,) * s.d_plus + (1,) * s.d_minus)
            if is_admissible(g, N):
                sigs.append(str(s))
        elif any(is_admissible(GammaType((0,) * s.d_plus + (1,) * s.d_minus, (k,)), N) for k in (1, 2)):
            sigs.append(str(s))

    def density(c2, c3):
        return sum(coefficient_density3(c2, c3, s, mode) for s in sigs)

    density.signatures = tuple(sigs)
    return density


def _completed_coefficients(records):
    """(c2, c3) for every record and for its dual when that is a different point."""
    raw, completed = [], []
    for r in records:
        c = r.coefficient_point()
        c2, c3 = float(c[2]), float(c[3])
        raw.append((c2, c3))
        completed.append((c2, c3))
        if c3 != 0:
            completed.append((c2, -c3))
    return raw, completed


def rectangle_stats(records, rectangle, density=None, method: str = "quad", budget: int = 48) -> RectangleStat:
    """Count dual-completed L-points with (c2, c3) in ``rectangle`` and compare with the
    Plancherel mass.  ``rectangle`` is ((c2_lo, c2_hi), (c3_lo, c3_hi))."""
    (a0, a1), (b0, b1) = rectangle
    density = density or landscape_density()
    raw, completed = _completed_coefficients(records)
    inside = lambda c: a0 <= c[0] <= a1 and b0 <= c[1] <= b1
    count = sum(map(inside, completed))
    raw_count = sum(map(inside, raw))
    mass, err = region_mass(density, rectangle, method, budget)
    ratio = count / mass if mass > 0 else math.nan
    return RectangleStat(((a0, a1), (b0, b1)), count, raw_count, mass, err, ratio)


def empirical_moments(records, primes=(2, 3, 5)) -> dict:
    """Mean of |a_p|^2 over the records that carry a_p, for each p."""
    out = {}
    for p in primes:
        vals = [float(abs(r.prime_coefficients()[p]) ** 2) for r in records
                if p in dict((n, 1) for n, *_ in r.coefficients)]
        out[p] = sum(vals) / len(vals) if vals else math.nan
    return out


# symmetric squares of degree-2 forms


@dataclass(frozen=True)
class ModularFormData:
    """Level-1 holomorphic eigenform: weight and a_p (integers, unnormalized)."""

    weight: int
    coefficients: dict = field(default_factory=dict)


@dataclass(frozen=True)
class MaassFormData:
    """Level-1 Maass eigenform: spectral parameter and real normalized a_p (decimal strings)."""

    spectral_parameter: str
    coefficients: dict = field(default_factory=dict)
    digits: int | None = None


def sym_square_ingest(data, source: str = "oracle", timestamp=None, digits: int = 40) -> LPointRecord:
    """Degree-3 record of the symmetric square, with b_p = a_p^2 - 1 (normalized a_p)."""
    if isinstance(data, ModularFormData):
        k = data.weight
        if k % 2:
            raise ValueError("level-1 forms have even weight")
        if k < 12:
            raise ValueError(f"there are no level-1 cusp forms of weight {k}")
        coeffs = []
        for p in sorted(data.coefficients):
            ap = data.coefficients[p]
            if isinstance(ap, complex) and ap.imag:
                raise ValueError("input is not self-dual: a_p must be real")
            b = Fraction(int(ap) ** 2, p ** (k - 1)) - 1
            coeffs.append((p, _fixed(mp.mpf(b.numerator) / b.denominator, digits), "0", digits))
        coords = ((str(k - 1), None), ("0", None))
        return LPointRecord(f"r1c{2 * (k - 1)}", 1, ("1", "0"), coords, tuple(coeffs),
                            _provenance(source, timestamp), "unverified")
    if isinstance(data, MaassFormData):
        lam = Fraction(data.spectral_parameter)
        d = data.digits if data.digits is not None else _decimals_of(data.spectral_parameter)
        coeffs = []
        for p in sorted(data.coefficients):
            ap = data.coefficients[p]
            if isinstance(ap, complex) and ap.imag:
                raise ValueError("input is not self-dual: a_p must be real")
            ap = str(ap)
            dp = _decimals_of(ap)
            coeffs.append((p, _fixed(mp.mpf(ap) ** 2 - 1, dp), "0", dp))
        coords = ((_decimal(2 * lam), d), ("0", None))
        return LPointRecord("r0r0r0", 1, ("1", "0"), coords, tuple(coeffs), _provenance(source, timestamp),
                            "unverified")
    raise TypeError("expected ModularFormData or MaassFormData")
