"""
离散对称性与矩系数零模式
Discrete symmetries of force fields and the zero pattern of their moments

g 作用于力场: (g·f)(x) = g f(gᵀx)，f 在群 G 下不变当且仅当对所有 g ∈ G 有 g·f = f。
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence

import numpy as np

from ..fields.forcing import ForceField, combine, random_gaussian_mixture
from ..utils.logger import get_logger
from .moments import MomentQuadrature, moment_coeffs, moment_envelope

logger = get_logger(__name__)

_CENTRAL = np.array([[-1.0, 0.0], [0.0, -1.0]])
_AXIS_X2 = np.array([[-1.0, 0.0], [0.0, 1.0]])
_SWAP = np.array([[0.0, 1.0], [1.0, 0.0]])

COEFFICIENT_NAMES = ("C01", "C02", "C11", "C12", "C13", "C21", "C22", "C23", "C24")
ZERO_TOLERANCE = 1e-10
GENERIC_FACTOR = 10.0


class SymmetryKind(str, Enum):
    CENTRAL = "a"
    AXIS_X2 = "b"
    ROTATED_AXIS = "c"
    TWO_AXES = "d"
    CENTRAL_ROTATED = "e"
    FOUR_AXES = "f"

    @property
    def generators(self) -> List[np.ndarray]:
        return {
            "a": [_CENTRAL], "b": [_AXIS_X2], "c": [_SWAP],
            "d": [_CENTRAL, _AXIS_X2], "e": [_CENTRAL, _SWAP], "f": [_AXIS_X2, _SWAP],
        }[self.value]

    def group(self) -> List[np.ndarray]:
        """由生成元闭包得到的有限群 / finite group generated by the generators"""
        elements = [np.eye(2)]
        frontier = [np.eye(2)]
        while frontier:
            new = []
            for g in frontier:
                for h in self.generators:
                    prod = np.rint(h @ g)
                    if not any(np.array_equal(prod, e) for e in elements):
                        elements.append(prod)
                        new.append(prod)
            frontier = new
        return elements


# 0 = 恒为零, * = 一般非零；列顺序 C01 C02 | C11 C12 C13 | C21 C22 C23 C24
EXPECTED_TABLE: Dict[SymmetryKind, str] = {
    SymmetryKind.CENTRAL: "00***0000",
    SymmetryKind.AXIS_X2: "0**000*0*",
    SymmetryKind.ROTATED_AXIS: "**0*0****",
    SymmetryKind.TWO_AXES: "00*000000",
    SymmetryKind.CENTRAL_ROTATED: "000*00000",
    SymmetryKind.FOUR_AXES: "000000000",
}


def symmetrize(force: ForceField, kind: SymmetryKind) -> ForceField:
    """群平均 (1/|G|) Σ g·f，结果在 G 下不变 / group average over the symmetry group"""
    group = SymmetryKind(kind).group()
    copies = [force.transformed(g) for g in group]
    averaged = combine(copies, [1.0 / len(group)] * len(group))
    return ForceField(averaged.fn, force.support_radius, f"sym[{SymmetryKind(kind).value}]({force.label})")


@dataclass
class SymmetryRow:
    kind: SymmetryKind
    expected: str
    zero_counts: List[int]
    generic_counts: List[int]
    n_members: int
    min_generic: int
    passed: bool = field(init=False)

    def __post_init__(self):
        checks = []
        for mark, zeros, generic in zip(self.expected, self.zero_counts, self.generic_counts):
            checks.append(zeros == self.n_members if mark == "0" else generic >= self.min_generic)
        self.passed = all(checks)

    @property
    def observed(self) -> str:
        return "".join("0" if z == self.n_members else "*" for z in self.zero_counts)


def symmetry_table_check(rng: Optional[np.random.Generator] = None, n_members: int = 20,
                         kinds: Optional[Sequence[SymmetryKind]] = None,
                         quadrature: Optional[MomentQuadrature] = None,
                         min_generic: Optional[int] = None) -> List[SymmetryRow]:
    """
    对每种对称性的随机系综检查 (C₀, C₁, C₂) 的零模式
    Check the zero pattern of the moments on a random ensemble per symmetry kind

    零: |c| < 1e-10·包络；一般非零: |c| > 10×该阈值，且至少 18/20 成员满足。
    """
    rng = rng if rng is not None else np.random.default_rng(0)
    kinds = list(kinds) if kinds is not None else list(SymmetryKind)
    quadrature = quadrature or MomentQuadrature(n_radial=128, n_angular=256)
    min_generic = min_generic if min_generic is not None else int(np.ceil(0.9 * n_members))
    rows = []
    for kind in kinds:
        zeros = np.zeros(len(COEFFICIENT_NAMES), dtype=int)
        generic = np.zeros(len(COEFFICIENT_NAMES), dtype=int)
        for _ in range(n_members):
            f = symmetrize(random_gaussian_mixture(rng), kind)
            values = np.abs(moment_coeffs(f, quadrature).as_vector())
            threshold = ZERO_TOLERANCE * moment_envelope(f, quadrature)
            zeros += values < threshold
            generic += values > GENERIC_FACTOR * threshold
        row = SymmetryRow(kind, EXPECTED_TABLE[kind], zeros.tolist(), generic.tolist(), n_members, min_generic)
        logger.info(f"对称性 ({kind.value}): 期望 {row.expected} 观测 {row.observed} -> {'通过' if row.passed else '失败'}")
        rows.append(row)
    return rows
