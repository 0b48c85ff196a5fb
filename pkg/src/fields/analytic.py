"""
解析解族注册表与求值入口
Registry of closed-form field families and their evaluation entry points
"""
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Mapping, Optional, Sequence, Tuple

import jax
import jax.numpy as jnp
import numpy as np

from .closed_forms import (
    asym0_state, asym1_state, asym2_state, check_euler_lambda, euler_state,
    flux_carrier_state, hamel_state, harmonic_vortex_state, moments_to_a_vector,
    stokes_fundamental_state,
)
from .cross_corrector import cross_corrector_angles, cross_corrector_state
from .perturbation import check_order, perturb_state
from .types import (
    CutoffProfile, DomainError, FieldKind, FlowJet, KindSpec, ParameterError, as_points,
)

WAKE_VALID_RADIUS = 10.0


@lru_cache(maxsize=None)
def _kind_table() -> Dict[FieldKind, KindSpec]:
    # 尾流模块依赖残差模块，延迟导入以避免循环依赖
    from ..wake.wake_field import wake_state

    return {
        FieldKind.STOKES_FUNDAMENTAL: KindSpec(
            ("F1", "F2"), {"F1": 1.0, "F2": 0.0}, stokes_fundamental_state,
            singular_origin=True, validity="everywhere",
            description="Stokes基本解的列组合 E·F / columns of the Stokes fundamental solution"),
        FieldKind.ASYM_TERM0: KindSpec(
            ("C01", "C02"), {"C01": 0.0, "C02": 0.0}, asym0_state,
            description="零阶渐近项 C₀·E₀ / zeroth asymptotic term"),
        FieldKind.ASYM_TERM1: KindSpec(
            ("C11", "C12", "C13"), {"C11": 0.0, "C12": 0.0, "C13": 0.0}, asym1_state,
            description="一阶渐近项 C₁·E₁ / first asymptotic term"),
        FieldKind.ASYM_TERM2: KindSpec(
            ("A1", "A2", "A3", "A4"), {"A1": 0.0, "A2": 0.0, "A3": 0.0, "A4": 0.0}, asym2_state,
            description="二阶渐近项 (A向量) / second asymptotic term in the A-vector basis"),
        FieldKind.FLUX_CARRIER: KindSpec(
            ("phi",), {"phi": 1.0}, flux_carrier_state,
            description="通量载体 ΦΣ / flux carrier"),
        FieldKind.HARMONIC_VORTEX: KindSpec(
            ("M",), {"M": 4.0 * np.pi}, harmonic_vortex_state,
            description="调和涡 / harmonic vortex"),
        FieldKind.HAMEL: KindSpec(
            ("A", "mu"), {"A": 1.0, "mu": 0.0}, hamel_state,
            singular_origin=True, validity="everywhere",
            description="Hamel精确解 / Hamel exact solution"),
        FieldKind.EULER_LEADING: KindSpec(
            ("A", "lam", "theta0"), {"A": 1.0, "lam": 0.0, "theta0": 0.0}, euler_state,
            singular_origin=True, validity="everywhere",
            description="Euler精确解 ψ₀ = √r φ₀(θ) / Euler exact solution"),
        FieldKind.WAKE: KindSpec(
            ("F1", "F2"), {"F1": -16.0 / 9.0, "F2": 0.0}, wake_state,
            validity="wake", options={"terms": ("full", "leading")},
            description="尾流近似解 U_F / wake approximate solution"),
        FieldKind.CROSS_CORRECTOR: KindSpec(
            ("A0", "A1", "A2", "A3", "nu"),
            {"A0": 0.0, "A1": 0.0, "A2": 0.0, "A3": 0.0, "nu": 1.0}, cross_corrector_state,
            validity="two-inner",
            options={"form": ("displayed", "stream"), "amplitude": ("printed", "squared")},
            description="二阶交叉修正 ū₂ / second-order cross corrector"),
        FieldKind.PERTURB_ITERATE: KindSpec(
            ("A", "B", "M", "C21", "C22"),
            {"A": 0.0, "B": 0.0, "M": 0.0, "C21": 0.0, "C22": 0.0}, perturb_state,
            options={"order": ("1", "2", "3"), "form": ("leading", "stream")},
            description="小参数迭代首项 uₙ / perturbative iterate"),
    }


def kind_spec(kind: FieldKind) -> KindSpec:
    return _kind_table()[FieldKind(kind)]


@lru_cache(maxsize=None)
def _compiled(kind: FieldKind, options: Tuple[Tuple[str, str], ...], cutoff: CutoffProfile):
    """按 (族, 选项, 截断) 编译一次；参数作为数组传入，换参数不重新编译"""
    spec = kind_spec(kind)
    opts = dict(options)

    def single(params, x):
        return spec.state(params, x, cutoff, opts)

    state = jax.jit(jax.vmap(single, in_axes=(None, 0)))
    jacobian = jax.jit(jax.vmap(jax.jacfwd(single, argnums=1), in_axes=(None, 0)))
    hessian = jax.jit(jax.vmap(jax.hessian(single, argnums=1), in_axes=(None, 0)))
    return state, jacobian, hessian


@dataclass(frozen=True)
class AnalyticField:
    """
    带参数的闭式解
    A named closed-form field with parameters

    参数按族的 param_names 顺序存放；jet / laplacian_u 对 (N,2) 点批量求值。
    """
    kind: FieldKind
    params: Tuple[float, ...]
    cutoff: CutoffProfile = field(default_factory=CutoffProfile)
    options: Tuple[Tuple[str, str], ...] = ()

    def __post_init__(self):
        spec = kind_spec(self.kind)
        if len(self.params) != len(spec.param_names):
            raise ParameterError(
                f"{self.kind.value} 需要 {len(spec.param_names)} 个参数 / expects parameters {spec.param_names}")
        for key, value in self.options:
            allowed = spec.options.get(key)
            if allowed is None or value not in allowed:
                raise ParameterError(f"{self.kind.value} 不支持选项 / unsupported option {key}={value}")
        self._validate_params()

    def _validate_params(self):
        p = self.param_dict
        if self.kind is FieldKind.EULER_LEADING:
            check_euler_lambda(p["lam"])
        elif self.kind is FieldKind.WAKE:
            if p["F1"] == 0.0 and p["F2"] == 0.0:
                raise ParameterError("尾流解要求 F ≠ 0 / wake field needs a nonzero force")
        elif self.kind is FieldKind.CROSS_CORRECTOR:
            cross_corrector_angles([p["A0"], p["A1"], p["A2"], p["A3"]],
                                   self.option_dict.get("amplitude", "printed"))
        elif self.kind is FieldKind.PERTURB_ITERATE:
            check_order(int(self.option_dict.get("order", "1")))

    @classmethod
    def create(cls, kind, cutoff: Optional[CutoffProfile] = None,
               options: Optional[Mapping[str, object]] = None, **params) -> "AnalyticField":
        """
        按参数名构造，未给出的参数取默认值
        Build from named parameters; missing ones take the family defaults
        """
        kind = FieldKind(kind)
        spec = kind_spec(kind)
        opts = {k: str(v) for k, v in (options or {}).items()}
        if kind is FieldKind.PERTURB_ITERATE and "order" in params:
            opts["order"] = str(int(params.pop("order")))
        unknown = set(params) - set(spec.param_names)
        if unknown:
            raise ParameterError(
                f"{kind.value} 未知参数 / unknown parameters {sorted(unknown)}; expected {spec.param_names}")
        values = tuple(float(params.get(name, spec.defaults[name])) for name in spec.param_names)
        return cls(kind, values, cutoff or CutoffProfile(), tuple(sorted(opts.items())))

    @classmethod
    def from_strings(cls, kind: str, params: str = "", options: str = "",
                     cutoff: Optional[CutoffProfile] = None) -> "AnalyticField":
        """解析命令行形式 'A=1,mu=0' / parse the CLI form 'A=1,mu=0'"""
        try:
            kind = FieldKind(kind)
        except ValueError:
            names = ", ".join(k.value for k in FieldKind)
            raise ParameterError(f"未知流场 / unknown field '{kind}'; choose one of {names}") from None
        return cls.create(kind, cutoff=cutoff, options=parse_assignments(options, numeric=False),
                          **parse_assignments(params))

    @property
    def spec(self) -> KindSpec:
        return kind_spec(self.kind)

    @property
    def param_dict(self) -> Dict[str, float]:
        return dict(zip(self.spec.param_names, self.params))

    @property
    def option_dict(self) -> Dict[str, str]:
        return dict(self.options)

    @property
    def validity_radius(self) -> float:
        """精确性声明成立的最小半径 smallest radius where exactness claims hold"""
        rule = self.spec.validity
        if rule == "outer":
            return self.cutoff.outer
        if rule == "two-inner":
            return max(2.0 * self.cutoff.inner, self.cutoff.outer)
        if rule == "wake":
            return WAKE_VALID_RADIUS
        return 0.0

    def with_params(self, **params) -> "AnalyticField":
        merged = {**self.param_dict, **params}
        return AnalyticField(self.kind, tuple(float(merged[n]) for n in self.spec.param_names),
                             self.cutoff, self.options)

    def _prepare(self, points, strict: bool) -> np.ndarray:
        pts = as_points(points)
        radii = np.hypot(pts[:, 0], pts[:, 1])
        if self.spec.singular_origin and np.any(radii == 0.0):
            raise DomainError(f"{self.kind.value} 在原点无定义 / undefined at the origin")
        if strict and np.any(radii < self.validity_radius):
            raise DomainError(
                f"{self.kind.value} 的闭式仅对 r ≥ {self.validity_radius:g} 成立 / "
                f"closed form valid only for r >= {self.validity_radius:g} (min r = {radii.min():.6g})")
        return pts

    def _functions(self):
        return _compiled(self.kind, self.options, self.cutoff)

    def state(self, points, strict: bool = False) -> np.ndarray:
        """(N,3) 数组 [u1, u2, p]"""
        pts = self._prepare(points, strict)
        fn, _, _ = self._functions()
        return np.asarray(fn(jnp.asarray(self.params), jnp.asarray(pts)))

    def jet(self, points, strict: bool = False) -> FlowJet:
        pts = self._prepare(points, strict)
        state_fn, jac_fn, _ = self._functions()
        params = jnp.asarray(self.params)
        values = np.asarray(state_fn(params, jnp.asarray(pts)))
        jac = np.asarray(jac_fn(params, jnp.asarray(pts)))
        return FlowJet(values[:, :2].copy(), values[:, 2].copy(), jac[:, :2, :].copy(), jac[:, 2, :].copy())

    def laplacian_u(self, points, strict: bool = False) -> np.ndarray:
        """解析 Δu，形状 (N,2) / analytic vector Laplacian"""
        pts = self._prepare(points, strict)
        _, _, hess_fn = self._functions()
        hess = np.asarray(hess_fn(jnp.asarray(self.params), jnp.asarray(pts)))
        return hess[:, :2, 0, 0] + hess[:, :2, 1, 1]

    def describe(self) -> Dict[str, object]:
        return {
            "kind": self.kind.value,
            "params": self.param_dict,
            "options": self.option_dict,
            "cutoff": {"inner": self.cutoff.inner, "outer": self.cutoff.outer},
        }


@dataclass(frozen=True)
class SuperposedField:
    """若干流场的线性叠加 Linear superposition of flow sources"""
    sources: Tuple[object, ...]

    def jet(self, points) -> FlowJet:
        pts = as_points(points)
        total = FlowJet.zeros(len(pts))
        for source in self.sources:
            total = total + source.jet(pts)
        return total

    def laplacian_u(self, points) -> np.ndarray:
        pts = as_points(points)
        return sum((source.laplacian_u(pts) for source in self.sources), np.zeros((len(pts), 2)))

    @property
    def has_laplacian(self) -> bool:
        return all(hasattr(s, "laplacian_u") for s in self.sources)


def parse_assignments(text: str, numeric: bool = True) -> Dict[str, object]:
    """'A=1,mu=0' -> {'A': 1.0, 'mu': 0.0}"""
    result: Dict[str, object] = {}
    if not text:
        return result
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        if "=" not in item:
            raise ParameterError(f"参数格式应为 name=value / expected name=value, got '{item}'")
        key, value = (s.strip() for s in item.split("=", 1))
        if numeric:
            try:
                result[key] = float(value)
            except ValueError:
                raise ParameterError(f"参数 {key} 不是数值 / parameter {key} is not a number: '{value}'") from None
        else:
            result[key] = value
    return result


# ---------------------------------------------------------------------------
# 单点求值入口 single-family evaluation entry points
# ---------------------------------------------------------------------------

ASYM_COEFF_LENGTHS = {0: 2, 1: 3, 2: 4}
ASYM_KINDS = {0: FieldKind.ASYM_TERM0, 1: FieldKind.ASYM_TERM1, 2: FieldKind.ASYM_TERM2}


def eval_asym_term(order: int, coeffs: Sequence[float], x, cutoff: Optional[CutoffProfile] = None,
                   strict: bool = True) -> FlowJet:
    """
    渐近展开第order项
    Term of the given order of the Stokes asymptotic expansion
    """
    if order not in ASYM_COEFF_LENGTHS:
        raise ParameterError(f"渐近项阶数只能为0、1、2 / order must be 0, 1 or 2, got {order}")
    if len(coeffs) != ASYM_COEFF_LENGTHS[order]:
        raise ParameterError(
            f"{order}阶系数长度应为 {ASYM_COEFF_LENGTHS[order]} / order {order} needs "
            f"{ASYM_COEFF_LENGTHS[order]} coefficients, got {len(coeffs)}")
    kind = ASYM_KINDS[order]
    field_ = AnalyticField(kind, tuple(float(c) for c in coeffs), cutoff or CutoffProfile())
    return field_.jet(x, strict=strict)


def eval_flux_carrier(phi: float, x, cutoff: Optional[CutoffProfile] = None) -> FlowJet:
    return AnalyticField.create(FieldKind.FLUX_CARRIER, cutoff, phi=phi).jet(x)


def eval_harmonic_vortex(m: float, x, cutoff: Optional[CutoffProfile] = None) -> FlowJet:
    return AnalyticField.create(FieldKind.HARMONIC_VORTEX, cutoff, M=m).jet(x)


def eval_hamel(amp: float, mu: float, x) -> FlowJet:
    return AnalyticField.create(FieldKind.HAMEL, A=amp, mu=mu).jet(x)


def eval_euler_leading(amp: float, lam: float, theta0: float, x) -> FlowJet:
    return AnalyticField.create(FieldKind.EULER_LEADING, A=amp, lam=lam, theta0=theta0).jet(x)


def eval_cross_corrector(a_vec: Sequence[float], nu: float, x, cutoff: Optional[CutoffProfile] = None,
                         form: str = "displayed", amplitude: str = "printed") -> FlowJet:
    a0, a1, a2, a3 = (float(a) for a in a_vec)
    field_ = AnalyticField.create(FieldKind.CROSS_CORRECTOR, cutoff,
                                  options={"form": form, "amplitude": amplitude},
                                  A0=a0, A1=a1, A2=a2, A3=a3, nu=nu)
    return field_.jet(x, strict=True)


def eval_perturb_iterate(order: int, a: float, b: float, m: float, x,
                         cutoff: Optional[CutoffProfile] = None, form: str = "leading") -> FlowJet:
    check_order(order)
    field_ = AnalyticField.create(FieldKind.PERTURB_ITERATE, cutoff,
                                  options={"order": order, "form": form}, A=a, B=b, M=m)
    return field_.jet(x, strict=True)


def first_order_field(a_vec: Sequence[float], cutoff: Optional[CutoffProfile] = None) -> SuperposedField:
    """ū₁ = A₀Σ + (A₁, A₂, A₃)·E₁"""
    a0, a1, a2, a3 = (float(a) for a in a_vec)
    cutoff = cutoff or CutoffProfile()
    return SuperposedField((
        AnalyticField.create(FieldKind.FLUX_CARRIER, cutoff, phi=a0),
        AnalyticField.create(FieldKind.ASYM_TERM1, cutoff, C11=a1, C12=a2, C13=a3),
    ))


def stokes_asymptotic_field(c0, c1, c2=None, cutoff: Optional[CutoffProfile] = None) -> SuperposedField:
    """
    由力场矩构造 S₀ + S₁ (+ S₂)
    Build S₀ + S₁ (+ S₂) from the moments of a force field
    """
    cutoff = cutoff or CutoffProfile()
    terms = [
        AnalyticField(FieldKind.ASYM_TERM0, tuple(float(c) for c in c0), cutoff),
        AnalyticField(FieldKind.ASYM_TERM1, tuple(float(c) for c in c1), cutoff),
    ]
    if c2 is not None:
        terms.append(AnalyticField(FieldKind.ASYM_TERM2, tuple(moments_to_a_vector(c2)), cutoff))
    return SuperposedField(tuple(terms))
