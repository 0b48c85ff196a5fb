#!/usr/bin/env python3
"""
planeflow 主程序
Main program for planeflow: steady planar Navier-Stokes experiments
"""
import sys
import os
from functools import wraps
from typing import Optional

import click
from rich.console import Console
from rich.table import Table
from rich.panel import Panel

# 添加项目根目录到Python路径
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from config.environment import get_fit_window, get_grid_defaults, get_profile
from src.solver.newton import SolverDivergenceError
from src.utils.artifacts import RunClock, write_manifest
from src.utils.config import Config
from src.utils.experiment import ConfigError, ExperimentConfig, load_experiment
from src.utils.logger import get_logger, setup_logging
from src.verification.suites import SUITES
from src.workflow.executor import ExperimentExecutor, ExperimentOutcome

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CONFIG = 2
EXIT_DIVERGENCE = 3
EXIT_VERIFY = 4

console = Console()
logger = get_logger(__name__)


def run_options(func):
    """--config/--out/--jobs/--seed，子命令上的取值优先于全局取值"""
    @click.option('--config', '-c', 'config_path', type=click.Path(dir_okay=False),
                  help='实验配置文件 / experiment file (dotenv format)')
    @click.option('--out', '-o', 'out_dir', help='输出目录 / output directory')
    @click.option('--jobs', '-j', type=int, help='并发上限 / concurrency cap')
    @click.option('--seed', type=int, help='随机种子 / random seed')
    @wraps(func)
    def wrapper(*args, **kwargs):
        ctx = click.get_current_context()
        obj = ctx.ensure_object(dict)
        for key in ('config_path', 'out_dir', 'jobs', 'seed'):
            value = kwargs.pop(key)
            if value is not None:
                obj[key] = value
        return func(*args, **kwargs)
    return wrapper


def _floats_csv(values) -> str:
    return ",".join(str(v) for v in values)


def _force_params(text: str) -> str:
    """'Fx,Fy' -> 'F1=Fx,F2=Fy'"""
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if len(parts) != 2:
        raise ConfigError(f"--force 需要两个分量 Fx,Fy / --force needs Fx,Fy, got '{text}'")
    return f"F1={parts[0]},F2={parts[1]}"


def build_config(obj: dict, experiment: str, overrides: dict) -> ExperimentConfig:
    """
    合并实验文件、命令行选项与全局选项
    Merge the experiment file, command options and global options
    """
    values = {}
    source = None
    if obj.get('config_path'):
        file_cfg = load_experiment(obj['config_path'])
        if file_cfg.experiment != experiment:
            raise ConfigError(f"实验文件类型为 {file_cfg.experiment}，命令为 {experiment} / "
                              f"experiment file is '{file_cfg.experiment}' but command is '{experiment}'")
        values.update(file_cfg.values)
        source = file_cfg.source
    values.update({k: str(v) for k, v in overrides.items() if v is not None and v != ()})
    if obj.get('out_dir'):
        values['OUTPUT_DIR'] = obj['out_dir']
    if obj.get('seed') is not None:
        values['SEED'] = str(obj['seed'])
    values['EXPERIMENT'] = experiment
    return ExperimentConfig.from_mapping(values, source)


def show_outcome(outcome: ExperimentOutcome):
    """打印产物与摘要 / print artifacts and summary"""
    if outcome.report is not None:
        outcome.report.render(console)
    if outcome.summary and outcome.report is None:
        table = Table(title="摘要 / Summary")
        table.add_column("项目 / Item", style="cyan")
        table.add_column("值 / Value", style="green")
        for key, value in outcome.summary.items():
            table.add_row(str(key), f"{value:.6g}" if isinstance(value, float) else str(value))
        console.print(table)
    for frame in outcome.tables[:1]:
        table = Table(title="结果 / Results")
        for column in frame.columns:
            table.add_column(str(column), justify="right")
        for row in frame.head(20).itertuples(index=False):
            table.add_row(*[f"{v:.6g}" if isinstance(v, float) else str(v) for v in row])
        console.print(table)
    if outcome.outputs:
        table = Table(title="输出文件 / Outputs")
        table.add_column("名称 / Name", style="cyan")
        table.add_column("路径 / Path", style="green")
        for name, path in outcome.outputs.items():
            table.add_row(name, path)
        console.print(table)


def execute(ctx: click.Context, experiment: str, overrides: dict, force: Optional[str] = None):
    """
    运行一个实验并按结果设置退出码
    Run one experiment and map the outcome to an exit code

    force 为 --force 的原始文本，先原样合并，再解析为 FIELD_PARAMS。
    """
    obj = ctx.ensure_object(dict)
    clock = RunClock()
    command = " ".join(sys.argv[1:]) or ctx.command_path
    console.print(Panel.fit(f"🌀 planeflow {experiment}", style="blue"))

    cfg = None
    outcome = None
    status, code = "ok", EXIT_OK
    try:
        cfg = build_config(obj, experiment, overrides if force is None else {**overrides, "FIELD_PARAMS": force})
        if force is not None:
            cfg = build_config(obj, experiment, {**overrides, "FIELD_PARAMS": _force_params(force)})
        executor = ExperimentExecutor(cfg, jobs=obj.get('jobs') or Config.JOBS)
        outcome = executor.run()
        show_outcome(outcome)
        if outcome.report is not None and not outcome.report.passed:
            status, code = "verification-failed", EXIT_VERIFY
            console.print("❌ 验证未通过 / verification failed", style="red")
        else:
            console.print("✅ 完成 / done", style="green")
    except ConfigError as e:
        status, code = "config-error", EXIT_CONFIG
        console.print(f"❌ 配置错误 / config error: {e}", style="red")
        logger.error(f"配置错误 / config error: {e}")
    except SolverDivergenceError as e:
        status, code = "solver-divergence", EXIT_DIVERGENCE
        console.print(f"❌ 求解失败 / solver divergence: {e}", style="red")
        logger.error(str(e))
    except Exception as e:
        status, code = "error", EXIT_ERROR
        console.print(f"❌ {experiment} 执行失败 / {experiment} failed: {type(e).__name__}: {e}", style="red")
        logger.error(f"{experiment} 执行失败: {e}")

    if cfg is not None:
        out_dir = obj.get('out_dir') or cfg.output_dir
        outputs = outcome.outputs if outcome is not None else {}
        path = write_manifest(out_dir, command, cfg.to_dict(), clock, outputs, status)
        console.print(f"📄 manifest: {path}", style="dim")
    ctx.exit(code)


@click.group(name="planeflow")
@click.option('--config', '-c', 'config_path', type=click.Path(dir_okay=False),
              help='实验配置文件 / experiment file (dotenv format)')
@click.option('--out', '-o', 'out_dir', help='输出目录 / output directory')
@click.option('--jobs', '-j', type=int, default=None, help='并发上限 / concurrency cap (default 1)')
@click.option('--seed', type=int, default=None, help='随机种子 / random seed')
@click.option('--log-level', type=click.Choice(['DEBUG', 'INFO', 'WARNING', 'ERROR'], case_sensitive=False),
              help='日志级别 / log level (default LOG_LEVEL)')
@click.pass_context
def cli(ctx, config_path, out_dir, jobs, seed, log_level):
    """planeflow - 二维定常Navier-Stokes流动的解析解、不变量与数值实验"""
    if log_level:
        setup_logging(log_level)
    ctx.ensure_object(dict)
    ctx.obj.update({'config_path': config_path, 'out_dir': out_dir, 'jobs': jobs, 'seed': seed})


@cli.command()
def check_config():
    """检查配置 Check configuration"""
    console.print(Panel.fit("🔧 配置检查 / Configuration Check", style="blue"))

    ok = Config.validate_config()
    table = Table(title="配置信息 / Configuration Info")
    table.add_column("配置项 / Config Item", style="cyan")
    table.add_column("值 / Value", style="green")
    grid = get_grid_defaults()
    rows = [
        ("分辨率档位 / Profile", get_profile()),
        ("默认网格 / Default grid", f"R={grid['r_outer']:g}, {grid['n_r']}×{grid['n_theta']}"),
        ("拟合窗口 / Fit window", str(get_fit_window())),
        ("日志级别 / Log level", Config.LOG_LEVEL),
        ("输出目录 / Output dir", Config.OUTPUT_DIR),
        ("并发 / Jobs", str(Config.JOBS)),
        ("种子 / Seed", str(Config.SEED)),
        ("浮点格式 / Float format", Config.FLOAT_FORMAT),
    ]
    for item, value in rows:
        table.add_row(item, value)
    console.print(table)

    if ok:
        console.print("✅ 配置验证通过 / Configuration validation passed", style="green")
    else:
        console.print("❌ 配置验证失败 / Configuration validation failed", style="red")
        console.print("请检查 .env 文件中的配置项", style="yellow")
        sys.exit(EXIT_CONFIG)


@cli.command(name="eval")
@click.option('--field', '-f', 'field_kind', help='流场族 / field kind, e.g. hamel, wake, solution')
@click.option('--params', '-p', help='参数 / parameters, e.g. A=1,mu=0')
@click.option('--options', help='选项 / options, e.g. terms=leading')
@click.option('--points', help='点集 / grid | ray:theta:rmin:rmax:n | x1,x2;x1,x2')
@click.option('--solution', help='解文件 / solution .npz for --field solution')
@run_options
@click.pass_context
def eval_cmd(ctx, field_kind, params, options, points, solution):
    """计算流场值与导数 / Evaluate a field at points"""
    execute(ctx, "eval", {"FIELD_KIND": field_kind, "FIELD_PARAMS": params, "FIELD_OPTIONS": options,
                          "POINTS": points, "SOLUTION": solution})


@cli.command()
@click.option('--field', '-f', 'field_kind', help='流场族 / field kind')
@click.option('--params', '-p', help='参数 / parameters')
@click.option('--options', help='选项 / options')
@click.option('--force', 'force', help='尾流净力 / wake force Fx,Fy (sets F1,F2)')
@click.option('--op', 'operator', help='算子 / operator: ns | stokes | euler')
@click.option('--nu', type=float, help='粘性系数 / nu')
@click.option('--ray', 'rays', type=float, multiple=True, help='射线角 / ray angle (repeatable)')
@click.option('--window', help='拟合窗口 / rmin,rmax')
@click.option('--n-samples', type=int, help='每条射线的采样数 / samples per ray')
@click.option('--solution', help='解文件 / solution .npz for --field solution')
@run_options
@click.pass_context
def residual(ctx, field_kind, params, options, force, operator, nu, rays, window, n_samples, solution):
    """沿射线的算子残差与衰减指数 / Operator residual decay along rays"""
    execute(ctx, "residual", {"FIELD_KIND": field_kind, "FIELD_PARAMS": params, "FIELD_OPTIONS": options,
                              "OPERATOR": operator, "NU": nu, "RAYS": _floats_csv(rays) if rays else None,
                              "WINDOW": window, "N_SAMPLES": n_samples, "SOLUTION": solution}, force)


@cli.command()
@click.option('--field', '-f', 'field_kind', help='流场族 / field kind')
@click.option('--params', '-p', help='参数 / parameters')
@click.option('--options', help='选项 / options')
@click.option('--radius', 'radii', type=float, multiple=True, help='积分半径 / contour radius (repeatable)')
@click.option('--nquad', type=int, help='求积点数 / quadrature nodes')
@click.option('--op', 'operator', help='euler 时使用无粘应力 / euler uses the inviscid stress')
@click.option('--nu', type=float, help='粘性系数 / nu')
@click.option('--solution', help='解文件 / solution .npz for --field solution')
@run_options
@click.pass_context
def invariants(ctx, field_kind, params, options, radii, nquad, operator, nu, solution):
    """圆周上的流量、净力与力矩 / Flux, net force and torque on circles"""
    execute(ctx, "invariants", {"FIELD_KIND": field_kind, "FIELD_PARAMS": params, "FIELD_OPTIONS": options,
                                "RADIUS": _floats_csv(radii) if radii else None, "N_QUAD": nquad,
                                "OPERATOR": operator, "NU": nu, "SOLUTION": solution})


@cli.command()
@click.option('--force', 'force_spec', help='力场 / force spec, e.g. lift:0.7,-0.4,1.1 or bump:0,0,1,0,0.5')
@run_options
@click.pass_context
def moments(ctx, force_spec):
    """力场的矩系数 C₀、C₁、C₂ / Moment coefficients of a force"""
    execute(ctx, "moments", {"FORCE_SPEC": force_spec})


@cli.command()
@click.option('--force', 'force', help='尾流净力 / wake force Fx,Fy')
@click.option('--ray', 'rays', type=float, multiple=True, help='射线角 / ray angle (repeatable)')
@click.option('--window', help='拟合窗口 / rmin,rmax')
@click.option('--terms', type=click.Choice(['full', 'leading']), help='尾流展开项 / wake terms')
@click.option('--radius', 'radii', type=float, multiple=True, help='外推半径 / extrapolation radii')
@run_options
@click.pass_context
def wake(ctx, force, rays, window, terms, radii):
    """尾流解的参数、残差阶与外推净力 / Wake parameters, residual orders and force"""
    execute(ctx, "wake", {"RAYS": _floats_csv(rays) if rays else None,
                          "WINDOW": window, "FIELD_OPTIONS": f"terms={terms}" if terms else None,
                          "RADIUS": _floats_csv(radii) if radii else None}, force)


def grid_options(func):
    for decorator in reversed([
        click.option('--r-inner', type=float, help='内半径 / inner radius'),
        click.option('--r-outer', type=float, help='外半径 / outer radius'),
        click.option('--n-r', type=int, help='径向点数 / radial nodes'),
        click.option('--n-theta', type=int, help='角向点数 / angular nodes'),
        click.option('--inner', type=click.Choice(['body', 'regular']), help='内边界 / inner condition'),
        click.option('--outer', type=click.Choice(['open', 'dirichlet']), help='外边界 / outer condition'),
        click.option('--tol', type=float, help='Newton相对容差 / Newton tolerance'),
        click.option('--max-iter', type=int, help='最大迭代数 / max Newton iterations'),
    ]):
        func = decorator(func)
    return func


def _grid_overrides(r_inner, r_outer, n_r, n_theta, inner, outer, tol, max_iter) -> dict:
    return {"GRID_R_INNER": r_inner, "GRID_R_OUTER": r_outer, "GRID_N_R": n_r, "GRID_N_THETA": n_theta,
            "BC_INNER": inner, "BC_OUTER": outer, "SOLVER_TOL": tol, "SOLVER_MAX_ITER": max_iter}


@cli.command()
@click.option('--c0', help='边界力系数 / C0 as c1,c2')
@click.option('--c1', help='边界应变与力矩系数 / C1 as a,b,m')
@click.option('--forcing', 'force_spec', help='体积力 / force spec')
@click.option('--delta-n', type=int, help='δ强迫的对称阶数 / order of the delta forcing')
@click.option('--amplitude', type=float, help='δ强迫幅值 / delta forcing amplitude')
@click.option('--eps', type=float, help='δ强迫宽度 / delta forcing width')
@grid_options
@run_options
@click.pass_context
def solve(ctx, c0, c1, force_spec, delta_n, amplitude, eps, r_inner, r_outer, n_r, n_theta, inner, outer,
          tol, max_iter):
    """ψ–ω Newton求解 / Solve one boundary-value problem"""
    overrides = {"BC_C0": c0, "BC_C1": c1, "FORCE_SPEC": force_spec, "FORCING_N": delta_n,
                 "FORCING_AMPLITUDE": amplitude, "FORCING_EPS": eps}
    overrides.update(_grid_overrides(r_inner, r_outer, n_r, n_theta, inner, outer, tol, max_iter))
    execute(ctx, "solve", overrides)


@cli.command()
@click.option('--mode', type=click.Choice(['force', 'strain', 'delta']), help='扫描模式 / sweep mode')
@click.option('--param1', help='参数1 / start:stop:steps or a list')
@click.option('--param2', help='参数2 / start:stop:steps or a list')
@click.option('--order', type=click.Choice(['param1-first', 'param2-first', 'both']), help='延拓顺序 / order')
@click.option('--delta-n', type=int, help='δ强迫的对称阶数 / order of the delta forcing')
@click.option('--fold', type=click.Choice(['none', 'pi']), help='角度折叠 / angle fold')
@click.option('--window', help='分析窗口 / analysis window rmin,rmax')
@grid_options
@run_options
@click.pass_context
def sweep(ctx, mode, param1, param2, order, delta_n, fold, window, r_inner, r_outer, n_r, n_theta, inner,
          outer, tol, max_iter):
    """参数延拓扫描与相图 / Continuation sweep and phase map"""
    overrides = {"SWEEP_MODE": mode, "SWEEP_PARAM1": param1, "SWEEP_PARAM2": param2, "SWEEP_ORDER": order,
                 "FORCING_N": delta_n, "ANALYSIS_FOLD": fold, "ANALYSIS_WINDOW": window}
    overrides.update(_grid_overrides(r_inner, r_outer, n_r, n_theta, inner, outer, tol, max_iter))
    execute(ctx, "sweep", overrides)


@cli.command()
@click.option('--solution', '-s', help='解文件 / solution .npz')
@click.option('--window', help='分析窗口 / analysis window rmin,rmax')
@click.option('--fold', type=click.Choice(['none', 'pi']), help='角度折叠 / angle fold')
@run_options
@click.pass_context
def analyze(ctx, solution, window, fold):
    """衰减指数、方向统计与拟合 / Decay, direction statistics and fits"""
    execute(ctx, "analyze", {"SOLUTION": solution, "ANALYSIS_WINDOW": window, "ANALYSIS_FOLD": fold})


@cli.command()
@click.option('--solution', '-s', help='解文件 .npz 或相图 .csv / solution .npz or phasemap .csv')
@click.option('--window', help='分析窗口 / analysis window rmin,rmax')
@run_options
@click.pass_context
def plot(ctx, solution, window):
    """SVG图表 / SVG plots"""
    execute(ctx, "plot", {"SOLUTION": solution, "ANALYSIS_WINDOW": window})


@cli.command()
@click.argument('suite', required=False, type=click.Choice(list(SUITES)))
@run_options
@click.pass_context
def verify(ctx, suite):
    """验收检查套件 / Acceptance check suite"""
    execute(ctx, "verify", {"SUITE": suite})


EXPERIMENT_COMMANDS = {
    "eval": eval_cmd, "residual": residual, "invariants": invariants, "moments": moments, "wake": wake,
    "solve": solve, "sweep": sweep, "analyze": analyze, "plot": plot, "verify": verify,
}


@cli.command(context_settings={"ignore_unknown_options": True, "allow_extra_args": True})
@click.argument('experiment', required=False)
@run_options
@click.pass_context
def run(ctx, experiment):
    """
    运行实验文件 / Run an experiment file

    run --config fm_sweep.cfg 或 run sweep --config fm_sweep.cfg；其余参数转交给对应子命令。
    """
    obj = ctx.ensure_object(dict)
    if experiment is None:
        if not obj.get('config_path'):
            console.print("❌ 需要实验类型或 --config / need an experiment or --config", style="red")
            ctx.exit(EXIT_CONFIG)
        try:
            experiment = load_experiment(obj['config_path']).experiment
        except ConfigError as e:
            console.print(f"❌ 配置错误 / config error: {e}", style="red")
            ctx.exit(EXIT_CONFIG)
    command = EXPERIMENT_COMMANDS.get(experiment)
    if command is None:
        console.print(f"❌ 未知实验类型 / unknown experiment '{experiment}'", style="red")
        ctx.exit(EXIT_CONFIG)
    with command.make_context(experiment, list(ctx.args), parent=ctx) as sub_ctx:
        command.invoke(sub_ctx)


if __name__ == '__main__':
    cli(prog_name="planeflow")
