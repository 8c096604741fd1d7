"""Run configuration: INI-style text with bracketed sections.

Lines are `key = value` with '#' comments; errors carry line numbers.
"""

from dataclasses import dataclass, field as dc_field

import numpy as np

from .equations import EquationModel, N_COMPONENTS
from .errors import ConfigError
from .grid import Grid1D, Grid2D, build_sphere_grid
from .numerical_flux import SCHEME_NAMES, FluxScheme
from .time_integration import STEPPERS, StepControl

IC_NAMES = (
    "dambreak1d",
    "gaussian2d",
    "sod1d",
    "euler2d_riemann",
    "rossby_haurwitz",
    "lake_at_rest",
    "from_file",
)

RECONSTRUCTIONS = ("order1", "minmod", "minmod-paper")

_FLOAT_KEYS = {
    "model": ("g", "gamma", "omega", "radius", "manning_n"),
    "grid": ("x_min", "x_max", "y_min", "y_max"),
    "initial": ("hl", "hr", "x0", "y0", "sigma", "h0", "amplitude"),
    "scheme": ("lf_ratio", "entropy_fix"),
    "time": ("cfl", "t_end", "fixed_dt", "dt_max"),
}
_INT_KEYS = {
    "grid": ("nx", "ny"),
    "time": ("fixed_dt_nx",),
    "output": ("snapshot_every_steps", "diagnostics_every_steps"),
    "run": ("seed",),
}
_STR_KEYS = {
    "model": ("system",),
    "initial": ("name", "file"),
    "boundary": ("x", "y"),
    "scheme": ("flux", "reconstruction", "weights"),
    "time": ("mode", "stepper"),
    "output": ("prefix", "snapshot_every_time"),
}
_SECTIONS = ("run", "model", "grid", "initial", "boundary", "scheme", "time", "output")


@dataclass
class RunConfig:
    system: str
    grid_spec: dict
    ic_name: str
    ic_params: dict = dc_field(default_factory=dict)
    model_params: dict = dc_field(default_factory=dict)
    bc_x: str = "periodic"
    bc_y: str = "periodic"
    scheme: FluxScheme = dc_field(default_factory=lambda: FluxScheme("rusanov"))
    reconstruction: str = "minmod"
    weights: str | None = None
    stepper: str = "tvd_rk3"
    control: StepControl = dc_field(default_factory=lambda: StepControl(t_end=1.0))
    snapshot_every_steps: int | None = None
    snapshot_every_time: float | None = None
    diagnostics_every_steps: int = 10
    prefix: str = "run"
    seed: int = 0

    def make_model(self):
        return EquationModel(system=self.system, **self.model_params)

    def make_grid(self):
        g = self.grid_spec
        if self.system == "swe_sphere":
            radius = self.model_params.get("radius", 1.0)
            return build_sphere_grid(g["nx"], g["ny"], radius)
        if self.system in ("swe1d", "euler1d"):
            return Grid1D(g.get("x_min", 0.0), g.get("x_max", 1.0), g["nx"])
        return Grid2D(
            g.get("x_min", 0.0),
            g.get("x_max", 1.0),
            g.get("y_min", 0.0),
            g.get("y_max", 1.0),
            g["nx"],
            g["ny"],
        )

    def validate(self):
        if self.system not in N_COMPONENTS:
            raise ConfigError(f"unknown system '{self.system}'")
        if self.ic_name not in IC_NAMES:
            raise ConfigError(f"unknown initial condition '{self.ic_name}'")
        if "nx" not in self.grid_spec:
            raise ConfigError("missing required key: [grid] nx")
        if self.system not in ("swe1d", "euler1d") and "ny" not in self.grid_spec:
            raise ConfigError("missing required key: [grid] ny (2D/sphere system)")
        if self.system == "swe_sphere":
            for k in ("x_min", "x_max", "y_min", "y_max"):
                if k in self.grid_spec:
                    raise ConfigError(
                        "sphere grids take nx/ny only (extents are fixed)"
                    )
        base = self.reconstruction.split(":", 1)[0]
        if base == "coeff":
            if ":" in self.reconstruction and not self.weights:
                self.weights = self.reconstruction.split(":", 1)[1]
            if not self.weights:
                raise ConfigError("coeff reconstruction needs [scheme] weights = <path>")
        elif self.reconstruction not in RECONSTRUCTIONS:
            raise ConfigError(f"unknown reconstruction '{self.reconstruction}'")
        if self.stepper not in STEPPERS:
            raise ConfigError(f"unknown stepper '{self.stepper}' (have {sorted(STEPPERS)})")
        if self.ic_name == "from_file" and "file" not in self.ic_params:
            raise ConfigError("from_file initial condition needs [initial] file = <path>")
        # instantiating validates parameter ranges (g, gamma, cfl bounds)
        self.make_model()
        return self


def _typed(section, key, value, line_no):
    if key in _FLOAT_KEYS.get(section, ()):
        try:
            return float(value)
        except ValueError:
            raise ConfigError(f"line {line_no}: invalid number '{value}' for {key}")
    if key in _INT_KEYS.get(section, ()):
        try:
            return int(value)
        except ValueError:
            raise ConfigError(f"line {line_no}: invalid integer '{value}' for {key}")
    if key in _STR_KEYS.get(section, ()):
        return value
    raise ConfigError(f"line {line_no}: unknown key '{key}' in section [{section}]")


def parse_config(text):
    """Parse and fully validate a run configuration."""
    sections = {}
    current = None
    for line_no, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1].strip().lower()
            if current not in _SECTIONS:
                raise ConfigError(f"line {line_no}: unknown section [{current}]")
            sections.setdefault(current, {})
            continue
        if "=" not in line:
            raise ConfigError(f"line {line_no}: expected 'key = value', got '{raw_line.strip()}'")
        if current is None:
            raise ConfigError(f"line {line_no}: key outside of any [section]")
        key, value = (part.strip() for part in line.split("=", 1))
        sections[current][key] = _typed(current, key.lower(), value, line_no)

    model_sec = dict(sections.get("model", {}))
    system = model_sec.pop("system", None)
    if system is None:
        raise ConfigError("missing required key: [model] system")

    initial = dict(sections.get("initial", {}))
    ic_name = initial.pop("name", None)
    if ic_name is None:
        raise ConfigError("missing required key: [initial] name")

    scheme_sec = dict(sections.get("scheme", {}))
    flux_name = scheme_sec.get("flux", "rusanov")
    scheme = FluxScheme(
        flux_name,
        lf_ratio=scheme_sec.get("lf_ratio"),
        entropy_fix=scheme_sec.get("entropy_fix", 0.0),
    )

    time_sec = dict(sections.get("time", {}))
    if "t_end" not in time_sec:
        raise ConfigError("missing required key: [time] t_end")
    control = StepControl(
        t_end=time_sec["t_end"],
        cfl=time_sec.get("cfl", 0.3),
        mode=time_sec.get("mode", "adaptive"),
        fixed_dt=time_sec.get("fixed_dt"),
        fixed_dt_nx=time_sec.get("fixed_dt_nx", 128),
        dt_max=time_sec.get("dt_max", 1e30),
    )

    bc = sections.get("boundary", {})
    out = sections.get("output", {})
    snap_time = out.get("snapshot_every_time")
    cfg = RunConfig(
        system=system,
        grid_spec=dict(sections.get("grid", {})),
        ic_name=ic_name,
        ic_params=initial,
        model_params=model_sec,
        bc_x=bc.get("x", "periodic"),
        bc_y=bc.get("y", "periodic"),
        scheme=scheme,
        reconstruction=scheme_sec.get("reconstruction", "minmod"),
        weights=scheme_sec.get("weights"),
        stepper=time_sec.get("stepper", "tvd_rk3"),
        control=control,
        snapshot_every_steps=out.get("snapshot_every_steps"),
        snapshot_every_time=float(snap_time) if snap_time is not None else None,
        diagnostics_every_steps=out.get("diagnostics_every_steps", 10),
        prefix=out.get("prefix", "run"),
        seed=sections.get("run", {}).get("seed", 0),
    )
    return cfg.validate()


def load_config(path):
    with open(path, "r", encoding="utf-8") as f:
        return parse_config(f.read())
