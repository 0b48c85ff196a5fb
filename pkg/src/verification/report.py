"""
验收检查结果与报告
Check results and suite reports
"""
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import List, Optional, Union

from rich.console import Console
from rich.table import Table

from ..utils.artifacts import write_json

Measured = Union[float, str, None]


@dataclass
class CheckResult:
    name: str
    passed: bool
    measured: Measured
    threshold: Measured
    detail: str = ""

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class SuiteReport:
    suite: str
    checks: List[CheckResult] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.passed for c in self.checks)

    @property
    def summary(self) -> dict:
        n_pass = sum(c.passed for c in self.checks)
        return {"total": len(self.checks), "passed": n_pass, "failed": len(self.checks) - n_pass}

    def to_dict(self) -> dict:
        return {"suite": self.suite, "passed": self.passed, "elapsed": self.elapsed,
                "summary": self.summary, "checks": [c.to_dict() for c in self.checks]}

    def table(self) -> Table:
        table = Table(title=f"验证 / verify {self.suite}")
        table.add_column("检查项 / Check", style="cyan")
        table.add_column("结果 / Result")
        table.add_column("测量值 / Measured", justify="right")
        table.add_column("阈值 / Threshold", justify="right")
        table.add_column("说明 / Detail", style="dim")
        for c in self.checks:
            table.add_row(c.name, "[green]✅ pass[/green]" if c.passed else "[red]❌ fail[/red]",
                          _fmt(c.measured), _fmt(c.threshold), c.detail)
        return table

    def render(self, console: Optional[Console] = None):
        (console or Console()).print(self.table())

    def write(self, out_dir) -> Path:
        """verify_<suite>.json"""
        return write_json(self.to_dict(), Path(out_dir) / f"verify_{self.suite}.json")


def _fmt(value: Measured) -> str:
    if value is None:
        return "-"
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)
