"""Run configuration: INI ingestion, validation and content hashing.

Example::

    [run]
    preset = Na-3p3s
    observable = tam
    rtol = 1e-7

    [packet]
    m_gamma = 3
    sigma_mult = 1.0

    [trap]
    sigma_b_nm = 100

    [sweep]
    axis = t
    values = 1, 2, 5, 10
    series_axis = sigma_mult
    series_values = 1, 1.5, 2

Every validation error names the file and line of the offending key.
"""

import configparser
import hashlib
import json
import re
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from .. import __version__
from ..errors import ConfigError
from ..observables import GridSpec

OBSERVABLES = ("tam", "pair")
SWEEP_AXES = ("t", "sigma_mult", "m_gamma", "sigma_b_nm", "lam")
FORMATS = ("csv", "json")

_ATOM_KEYS = {"m_e": int, "cg_convention": str, "coupling_scale": float}
_PACKET_KEYS = {
    "m_gamma": int, "lam": int, "kappa_ratio": float, "sigma_mult": float,
    "b_nm": float, "phi_b": float, "detuning": float,
}
_TRAP_KEYS = {"sigma_b_nm": float}
_GRID_KEYS = {f.name: type(f.default) for f in fields(GridSpec) if f.default is not None}
_GRID_KEYS["p_max"] = int


@dataclass(frozen=True)
class RunConfig:
    """Everything that determines a sweep's numbers (and its hash)."""

    preset: str = "Na-3p3s"
    observable: str = "tam"
    atom: dict = field(default_factory=dict)
    packet: dict = field(default_factory=dict)
    trap: dict = field(default_factory=dict)
    grid: dict = field(default_factory=dict)
    axis: str = "t"
    values: tuple = (10.0,)
    series_axis: str = None
    series_values: tuple = ()
    t: float = 10.0
    rtol: float = 1e-7
    window: tuple = None

    def __post_init__(self):
        validate(self)

    def canonical(self):
        """Canonical JSON text; stable across platforms and runs."""
        d = asdict(self)
        d["values"] = [_num(v) for v in self.values]
        d["series_values"] = [_num(v) for v in self.series_values]
        d["window"] = list(self.window) if self.window is not None else None
        return json.dumps(d, sort_keys=True, separators=(",", ":"))

    def content_hash(self):
        payload = f"vortexpair/{__version__}\n{self.canonical()}".encode()
        return hashlib.sha256(payload).hexdigest()

    def points(self):
        """Ordered grid: series-major, sweep-minor."""
        series = self.series_values if self.series_axis else (None,)
        return [(sv, v) for sv in series for v in self.values]

    def to_ini(self):
        cp = configparser.ConfigParser()
        cp.optionxform = str
        run = {"preset": self.preset, "observable": self.observable,
               "rtol": repr(self.rtol), "t": repr(self.t)}
        if self.window is not None:
            run["window"] = f"{self.window[0]}, {self.window[1]}"
        cp["run"] = run
        for name in ("atom", "packet", "trap", "grid"):
            sec = getattr(self, name)
            if sec:
                cp[name] = {k: repr(v) if isinstance(v, float) else str(v) for k, v in sorted(sec.items())}
        sweep = {"axis": self.axis, "values": ", ".join(repr(v) for v in self.values)}
        if self.series_axis:
            sweep["series_axis"] = self.series_axis
            sweep["series_values"] = ", ".join(repr(v) for v in self.series_values)
        cp["sweep"] = sweep
        from io import StringIO

        buf = StringIO()
        cp.write(buf)
        return buf.getvalue()

    @classmethod
    def from_ini(cls, text, source="<string>"):
        return parse_config(text, source)


def _num(v):
    return int(v) if isinstance(v, (int, np.integer)) else float(v)


def validate(cfg):
    if cfg.observable not in OBSERVABLES:
        raise ConfigError(f"observable must be one of {OBSERVABLES}, got {cfg.observable!r}")
    if cfg.axis not in SWEEP_AXES:
        raise ConfigError(f"axis must be one of {SWEEP_AXES}, got {cfg.axis!r}")
    if cfg.series_axis is not None:
        if cfg.series_axis not in SWEEP_AXES or cfg.series_axis == cfg.axis:
            raise ConfigError(f"series_axis {cfg.series_axis!r} is not a valid, distinct sweep axis")
        if not cfg.series_values:
            raise ConfigError("series_values missing for the series axis")
    if not cfg.values:
        raise ConfigError("values must list at least one point")
    if not 1e-12 <= cfg.rtol <= 1e-3:
        raise ConfigError(f"rtol must lie in [1e-12, 1e-3], got {cfg.rtol}")
    if not 0 <= cfg.t <= 50:
        raise ConfigError(f"t must lie in [0, 50] (units of 1/Gamma), got {cfg.t}")
    for name, allowed in (("atom", _ATOM_KEYS), ("packet", _PACKET_KEYS),
                          ("trap", _TRAP_KEYS), ("grid", _GRID_KEYS)):
        unknown = set(getattr(cfg, name)) - set(allowed)
        if unknown:
            raise ConfigError(f"unknown [{name}] keys: {sorted(unknown)}")
    if cfg.axis in ("m_gamma", "lam"):
        for v in cfg.values:
            if int(v) != v:
                raise ConfigError(f"{cfg.axis} values must be integers, got {v}")


def _line_index(text):
    """Map (section, key) -> 1-based line number."""
    where, section = {}, None
    for i, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        m = re.match(r"^\[([^\]]+)\]", s)
        if m:
            section = m.group(1).strip()
            where[(section, None)] = i
            continue
        m = re.match(r"^([^=:#;\s][^=:]*?)\s*[=:]", s)
        if m and section is not None:
            where[(section, m.group(1).strip())] = i
    return where


def _parse_list(raw, conv):
    return tuple(conv(x.strip()) for x in raw.split(",") if x.strip())


def _parse_float_list(raw):
    raw = raw.strip()
    m = re.match(r"^linspace\(\s*([^,]+),\s*([^,]+),\s*(\d+)\s*\)$", raw)
    if m:
        return tuple(float(x) for x in np.linspace(float(m.group(1)), float(m.group(2)), int(m.group(3))))
    m = re.match(r"^range\(\s*(-?\d+),\s*(-?\d+)\s*\)$", raw)
    if m:
        return tuple(float(x) for x in range(int(m.group(1)), int(m.group(2)) + 1))
    return _parse_list(raw, float)


def parse_config(text, source="<string>", base=None):
    """Parse INI text into a :class:`RunConfig` with line-precise errors.

    Keys absent from ``text`` fall back to ``base`` (a RunConfig) or to the
    RunConfig defaults; section dictionaries are merged key by key.
    """
    kw, lines = _parse_kwargs(text, source)
    if base is not None:
        merged = asdict(base)
        for k, v in kw.items():
            merged[k] = {**merged[k], **v} if isinstance(v, dict) else v
        kw = merged
    try:
        return RunConfig(**kw)
    except ConfigError as exc:
        # attribute to the most specific line we can find
        msg = str(exc)
        for (sec, key), line in sorted(lines.items(), key=lambda kv: kv[1]):
            if key and re.match(rf"{re.escape(key)}\b", msg):
                raise ConfigError(f"{source}:{line}: [{sec}] {msg}") from None
        raise ConfigError(f"{source}: {msg}") from None


def _parse_kwargs(text, source):
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    try:
        cp.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(f"{source}: {exc}") from None
    lines = _line_index(text)

    def fail(section, key, msg):
        line = lines.get((section, key), lines.get((section, None), 0))
        where = f"[{section}] {key}" if key is not None else f"[{section}]"
        raise ConfigError(f"{source}:{line}: {where}: {msg}")

    known = {"run", "atom", "packet", "trap", "grid", "sweep"}
    for sec in cp.sections():
        if sec not in known:
            fail(sec, None, f"unknown section (expected one of {sorted(known)})")

    kw = {}
    if cp.has_section("run"):
        run = cp["run"]
        for key in run:
            val = run[key]
            try:
                if key in ("preset", "observable"):
                    kw[key] = val.strip()
                elif key in ("rtol", "t"):
                    kw[key] = float(val)
                elif key == "window":
                    w = _parse_list(val, int)
                    if len(w) != 2 or w[0] > w[1]:
                        raise ValueError("need 'lo, hi' with lo <= hi")
                    kw["window"] = w
                else:
                    fail("run", key, "unknown key")
            except ValueError as exc:
                fail("run", key, str(exc))

    for sec, allowed in (("atom", _ATOM_KEYS), ("packet", _PACKET_KEYS),
                         ("trap", _TRAP_KEYS), ("grid", _GRID_KEYS)):
        out = {}
        if cp.has_section(sec):
            kw[sec] = out
            for key in cp[sec]:
                if key not in allowed:
                    fail(sec, key, f"unknown key (allowed: {sorted(allowed)})")
                try:
                    conv = allowed[key]
                    raw = cp[sec][key].strip()
                    out[key] = conv(float(raw)) if conv is int else conv(raw)
                    if conv is int and float(raw) != int(float(raw)):
                        raise ValueError(f"expected an integer, got {raw}")
                except ValueError as exc:
                    fail(sec, key, str(exc))

    if cp.has_section("sweep"):
        sw = cp["sweep"]
        for key in sw:
            try:
                if key == "axis":
                    kw["axis"] = sw[key].strip()
                elif key == "values":
                    kw["values"] = _parse_float_list(sw[key])
                elif key == "series_axis":
                    kw["series_axis"] = sw[key].strip()
                elif key == "series_values":
                    kw["series_values"] = _parse_float_list(sw[key])
                else:
                    fail("sweep", key, "unknown key")
            except ValueError as exc:
                fail("sweep", key, str(exc))

    return kw, lines


def load_config(path, base=None):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(text, str(path), base)
