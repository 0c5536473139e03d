"""Flat ``key = value`` run configuration.

Keys carry their units in the name (``W_over_lambda``, ``L_over_ell``,
``varsigma_over_L`` ...). Lines starting with ``#`` are comments.
"""
import configparser
from dataclasses import asdict, dataclass, fields

from .errors import ParseError, ValidationError

MODES = ("waveguide", "slab", "quasiballistic", "saddle1d")


@dataclass
class RunConfig:
    mode: str = None
    d: int = 2
    W_over_lambda: float = None
    drop_cutoff_modes: bool = False
    N_mu: int = None
    contour_a: float = 0.5
    L_over_ell: float = None
    T_count: int = 199
    T_grid: str = "sech2"
    T_power: float = 3.0
    T_min: float = 1e-8
    T_max: float = 1 - 1e-6
    eta: float = 1e-6
    tol: float = 1e-10
    max_iter: int = 20000
    mixing: float = 1.0
    N_x: int = 1024
    convention: str = "sqrt"
    damping: float = 0.5
    # saddle1d
    L_over_lambda: float = 20.0
    varsigma_over_L: float = 0.02
    gamma_a_re: float = 1.2
    gamma_a_im: float = 1e-5
    gamma_b_re: float = 1.2
    gamma_b_im: float = 1e-5
    points_per_wavelength: int = 40
    padding_over_lambda: float = 2.0
    obstacle_gamma0: float = 0.0
    obstacle_sigma_over_L: float = 0.0
    obstacle_x0_over_L: float = 0.5
    output_dir: str = "."
    deterministic: bool = True

    def as_dict(self):
        return asdict(self)


_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _convert(key, raw):
    kind = _TYPES[key]
    if kind is bool:
        low = raw.lower()
        if low in ("true", "yes", "1"):
            return True
        if low in ("false", "no", "0"):
            return False
        raise ValueError(f"not a boolean: {raw!r}")
    if kind is int:
        val = float(raw)
        if val != int(val):
            raise ValueError(f"not an integer: {raw!r}")
        return int(val)
    return kind(raw)


def parse_config(text):
    """Parse the flat document and validate it; all problems are reported together."""
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#",))
    cp.optionxform = str
    try:
        cp.read_string("[run]\n" + text)
    except configparser.Error as exc:
        raise ParseError(str(exc)) from exc
    errors = []
    values = {}
    for key, raw in cp["run"].items():
        raw = raw.strip().strip('"').strip("'")
        if key not in _TYPES:
            errors.append(f"unknown key {key}")
            continue
        try:
            values[key] = _convert(key, raw)
        except ValueError as exc:
            errors.append(f"{key}: {exc}")
    cfg = RunConfig(**values)
    errors += validate(cfg)
    if errors:
        raise ValidationError(errors)
    return cfg


def load_config(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    return parse_config(text)


def validate(cfg):
    errors = []
    if cfg.mode not in MODES:
        errors.append(f"mode must be one of {', '.join(MODES)}")
    need = {"waveguide": ["W_over_lambda", "L_over_ell"],
            "slab": ["N_mu", "L_over_ell"],
            "quasiballistic": ["L_over_ell"],
            "saddle1d": ["L_over_ell"]}.get(cfg.mode, [])
    for key in need:
        if getattr(cfg, key) is None:
            errors.append(f"{key} is required for mode {cfg.mode}")
    if cfg.mode == "quasiballistic" and cfg.W_over_lambda is None and cfg.N_mu is None:
        errors.append("quasiballistic mode needs W_over_lambda (waveguide) or N_mu (slab)")

    def check(key, ok, what):
        val = getattr(cfg, key)
        if val is not None and not ok(val):
            errors.append(f"{key} must be {what}, got {val}")

    check("d", lambda v: v >= (1 if cfg.mode == "saddle1d" else 2), "at least 2")
    check("W_over_lambda", lambda v: v > 0, "positive")
    check("N_mu", lambda v: v >= 2, "at least 2")
    check("contour_a", lambda v: v >= 0, "non-negative")
    check("L_over_ell", lambda v: v >= 0, "non-negative")
    check("T_count", lambda v: v >= 2, "at least 2")
    check("T_grid", lambda v: v in ("sech2", "power"), "sech2 or power")
    check("T_power", lambda v: v > 0, "positive")
    check("T_min", lambda v: 0 < v < 1, "in (0, 1)")
    check("T_max", lambda v: 0 < v < 1 and v > cfg.T_min, "in (T_min, 1)")
    check("eta", lambda v: v >= 0, "non-negative")
    check("tol", lambda v: v > 0, "positive")
    check("max_iter", lambda v: v >= 1, "at least 1")
    check("mixing", lambda v: 0 < v <= 1, "in (0, 1]")
    check("N_x", lambda v: v >= 2, "at least 2")
    check("convention", lambda v: v in ("sqrt", "a_only"), "sqrt or a_only")
    check("damping", lambda v: 0 < v <= 1, "in (0, 1]")
    check("L_over_lambda", lambda v: v > 0, "positive")
    check("varsigma_over_L", lambda v: v >= 0, "non-negative")
    check("points_per_wavelength", lambda v: v >= 20, "at least 20")
    check("padding_over_lambda", lambda v: v >= 2, "at least 2")
    check("obstacle_sigma_over_L", lambda v: v >= 0, "non-negative")
    check("deterministic", lambda v: v is True, "true")
    return errors
