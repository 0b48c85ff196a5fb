"""
SVG图表生成
SVG plot emission

每个SVG在XML头之后嵌入一段注释，内含绘图数据的CSV，便于不重跑直接检查。
"""
import io
from pathlib import Path
from typing import Iterable, Optional

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
import pandas as pd  # noqa: E402
import seaborn as sns  # noqa: E402

from ..utils.config import Config  # noqa: E402
from ..utils.logger import get_logger  # noqa: E402
from .phase_map import PhaseMapRow, phase_frame  # noqa: E402
from .profiles import RayProfile  # noqa: E402

logger = get_logger(__name__)

HEATMAP_COLUMNS = ("exponent", "mean_angle", "angle_std", "force_norm", "M", "angle_difference")


def _data_comment(frame: pd.DataFrame) -> str:
    text = frame.to_csv(index=False, float_format=Config.FLOAT_FORMAT)
    # SVG注释中不允许出现 "--"
    return "<!-- planeflow data\n" + text.replace("--", "- -") + "-->\n"


def save_svg(fig, path, data: Optional[pd.DataFrame] = None) -> Path:
    """保存SVG并嵌入数据注释 / save the figure as SVG with an embedded data comment"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    buffer = io.StringIO()
    fig.savefig(buffer, format="svg", bbox_inches="tight", metadata={"Date": None})
    plt.close(fig)
    svg = buffer.getvalue()
    if data is not None:
        head, sep, tail = svg.partition("?>\n")
        svg = head + sep + _data_comment(data) + tail if sep else _data_comment(data) + svg
    path.write_text(svg, encoding="utf-8")
    logger.debug(f"写出图表 / wrote plot: {path}")
    return path


def plot_profile(profile: RayProfile, path, title: str = "") -> Path:
    """r^{1/3}·d(r) 与 r·d(r) 两条曲线 (对数横轴)"""
    sns.set_theme(style="whitegrid")
    fig, axes = plt.subplots(1, 2, figsize=(10, 4))
    r, d = profile.radii, profile.d
    axes[0].semilogx(r, r ** (1.0 / 3.0) * d, marker="o", markersize=3)
    axes[0].set_xlabel("r")
    axes[0].set_ylabel(r"$r^{1/3}\, d(r)$")
    axes[1].semilogx(r, r * d, marker="o", markersize=3, color="tab:orange")
    axes[1].set_xlabel("r")
    axes[1].set_ylabel(r"$r\, d(r)$")
    if title:
        fig.suptitle(title)
    data = profile.to_frame().assign(r13d=r ** (1.0 / 3.0) * d, rd=r * d)
    return save_svg(fig, path, data)


def plot_heatmap(rows: Iterable[PhaseMapRow], column: str, path, param_names=("param1", "param2")) -> Path:
    """相图某一列的热图 / heatmap of one phase-map column over (param1, param2)"""
    frame = phase_frame(rows)
    if column not in frame.columns:
        raise KeyError(f"相图没有列 / phase map has no column '{column}'")
    table = frame.pivot_table(index="param2", columns="param1", values=column, aggfunc="first", dropna=False)
    table = table.sort_index(ascending=False)
    sns.set_theme(style="white")
    fig, ax = plt.subplots(figsize=(7, 5.5))
    sns.heatmap(table.astype(float), ax=ax, cmap="viridis", cbar_kws={"label": column},
                xticklabels=[f"{v:.3g}" for v in table.columns], yticklabels=[f"{v:.3g}" for v in table.index])
    ax.set_xlabel(param_names[0])
    ax.set_ylabel(param_names[1])
    ax.set_title(column)
    return save_svg(fig, path, frame[["param1", "param2", column, "status"]])


def plot_phase_panels(rows: Iterable[PhaseMapRow], out_dir, param_names=("param1", "param2")) -> list:
    """六个面板各写一个SVG / one heatmap per phase-map panel"""
    rows = list(rows)
    out_dir = Path(out_dir)
    paths = []
    for column in HEATMAP_COLUMNS:
        values = np.array([r.to_record()[column] for r in rows], dtype=float)
        if not np.any(np.isfinite(values)):
            logger.info(f"跳过全为NaN的列 / skipping all-NaN column {column}")
            continue
        paths.append(plot_heatmap(rows, column, out_dir / f"phasemap_{column}.svg", param_names))
    return paths
