# -*- coding: utf-8 -*-
"""
style-audit 命令行入口

    style-audit audit-docs --corpus groups.jsonl --scorer mock:canonical --out report.json

配置来源优先级：命令行参数 > --config YAML 文件 > 环境变量默认值。
所有配置错误在任何网络请求之前报告（退出码 2）。
"""

import functools
import logging
import sys
import uuid
from pathlib import Path
from typing import Any, Callable, Dict, Optional

import click
import yaml
from pydantic import ValidationError

from style_audit import __version__, config
from style_audit.clients.cache import cache_gc
from style_audit.errors import ConfigError
from style_audit.models.run import RunConfig
from style_audit.models.scorer import ScorerDescriptor, parse_scorer_list
from style_audit.models.style import StyleId
from style_audit.services.corpus import validation_message
from style_audit.services.harness import diagnostic, run

logger = logging.getLogger(__name__)


def _init_logging(verbose: int = 0) -> None:
    """初始化基础日志配置（输出到 stderr，stdout 留给结果）"""
    level = logging.DEBUG if verbose else getattr(logging, config.LOG_LEVEL.upper(), logging.INFO)
    logging.basicConfig(
        level=level,
        format='%(asctime)s | %(levelname)-8s | %(name)s | %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S',
        stream=sys.stderr,
        force=True,
    )


def _load_yaml(path: Optional[Path]) -> Dict[str, Any]:
    if path is None:
        return {}
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = yaml.safe_load(f) or {}
    except (OSError, yaml.YAMLError) as e:
        raise ConfigError(f"无法读取配置文件 {path}: {e}", stage="harness") from e
    if not isinstance(data, dict):
        raise ConfigError(f"配置文件 {path} 顶层必须是映射", stage="harness")
    return data


def _scorers(raw: Any, endpoint: Optional[str]) -> list:
    """YAML/命令行中的打分器：SPEC 字符串或描述字典"""
    if raw is None:
        return []
    items = [raw] if isinstance(raw, str) else list(raw)
    specs = [x for x in items if isinstance(x, str)]
    out = parse_scorer_list(specs, endpoint) if specs else []
    out += [ScorerDescriptor.model_validate(x) for x in items if isinstance(x, dict)]
    return out


# 命令行参数名 -> RunConfig 字段名
_FIELD_NAMES = {
    "corpus": "corpus_path",
    "out": "out_path",
    "fmt": "out_format",
    "cache_dir": "cache_dir",
    "cache_max_bytes": "cache_max_bytes",
    "parallelism": "parallelism",
    "run_id": "run_id",
    "plot_dir": "plot_dir",
    "side": "side",
    "chat_endpoint": "chat_endpoint",
    "chat_model": "chat_model",
    "temperature": "temperature",
    "max_retries": "max_retries",
}


def build_config(command: str, options: Dict[str, Any]) -> RunConfig:
    """
    合并 YAML 文件与命令行参数，构建 RunConfig

    Raises:
        ConfigError: 文件、SPEC、风格名或字段校验失败
    """
    values = _load_yaml(options.get("config_file"))
    values.pop("command", None)
    for opt, field in _FIELD_NAMES.items():
        v = options.get(opt)
        if v is not None:
            values[field] = v
    if options.get("rewrite_queries"):
        values["rewrite_queries"] = True
    if options.get("all_answers"):
        values["correct_only"] = False

    endpoint = options.get("endpoint") or values.pop("endpoint", None) or config.BASE_URL
    cli_specs = options.get("scorer") or ()
    values["scorers"] = _scorers(list(cli_specs) if cli_specs else values.get("scorers"), endpoint)

    raw_style = options.get("query_style") or values.get("query_style")
    if raw_style is not None and not isinstance(raw_style, StyleId):
        try:
            values["query_style"] = StyleId.parse(str(raw_style))
        except ValueError as e:
            raise ConfigError(f"未知查询风格 '{raw_style}'", stage="harness") from e

    values.setdefault("run_id", uuid.uuid4().hex[:8])
    values.setdefault("cache_dir", config.CACHE_DIR)
    values.setdefault("parallelism", config.PARALLELISM)
    try:
        return RunConfig(command=command, **values)
    except ValidationError as e:
        raise ConfigError(validation_message(e), stage="harness") from e
    except TypeError as e:
        raise ConfigError(str(e), stage="harness") from e


def _dispatch(command: str, options: Dict[str, Any]) -> None:
    ctx = click.get_current_context()
    try:
        run_config = build_config(command, options)
    except Exception as e:
        code, line = diagnostic(e)
        click.echo(line, err=True)
        ctx.exit(code)
    ctx.exit(run(run_config))


# ========== 公共参数 ==========
def _common_options(func: Callable) -> Callable:
    options = [
        click.option("--config", "config_file", type=click.Path(path_type=Path), help="YAML 运行配置文件"),
        click.option("--corpus", type=click.Path(path_type=Path), help="输入语料（JSONL）"),
        click.option("--out", type=click.Path(path_type=Path), help="输出文件"),
        click.option("--format", "fmt", type=click.Choice(["json", "csv"]), help="输出格式"),
        click.option("--cache-dir", type=click.Path(path_type=Path), help="磁盘缓存目录"),
        click.option("--cache-max-bytes", type=int, help="运行结束后将缓存回收到该大小以内"),
        click.option("--parallelism", type=int, help="并发上限"),
        click.option("--run-id", help="运行 ID（默认随机）"),
    ]
    for opt in reversed(options):
        func = opt(func)
    return func


def _scorer_options(func: Callable) -> Callable:
    func = click.option("--endpoint", help="embedding SPEC 省略 @url 时使用的端点")(func)
    func = click.option(
        "--scorer", multiple=True, help="打分器 SPEC，可重复或逗号分隔（embedding:m@url, bm25[:k1=..,b=..], mock:..）"
    )(func)
    return func


def _command(name: str, **kwargs):
    """把参数字典交给 _dispatch 的命令装饰器"""

    def decorator(func: Callable) -> Callable:
        @functools.wraps(func)
        def wrapper(**options):
            _dispatch(name, options)

        return cli.command(name, **kwargs)(wrapper)

    return decorator


@click.group()
@click.version_option(__version__, prog_name="style-audit")
@click.option("-v", "--verbose", count=True, help="输出 DEBUG 日志")
def cli(verbose: int) -> None:
    """检索打分器写作风格偏差审计工具"""
    _init_logging(verbose)


@_command("generate-styles")
@_common_options
@click.option("--chat-endpoint", help="OpenAI 兼容对话端点 base_url")
@click.option("--chat-model", help="改写使用的对话模型")
@click.option("--temperature", type=float, help="采样温度（默认 0.5）")
@click.option("--max-retries", type=int, help="单条改写的重试次数")
@click.option("--rewrite-queries", is_flag=True, help="同时改写查询")
def generate_styles(**options):
    """为 (query, document) 对生成 9 种风格变体，输出组格式 JSONL"""


@_command("stats")
@_common_options
@click.option("--side", type=click.Choice(["document", "query", "answer"]), help="统计哪一侧")
@click.option("--all-answers", is_flag=True, help="answer 侧不过滤人工标注为错误的答案")
def stats(**options):
    """风格变体的长度与 BLEU / METEOR / ROUGE-L 统计"""


@_command("audit-docs")
@_common_options
@_scorer_options
@click.option("--query-style", help="使用的查询风格（默认 original）")
@click.option("--plot-dir", type=click.Path(path_type=Path), help="写出绘图数据的目录")
def audit_docs(**options):
    """文档风格审计：平均名次与不公平分数"""


@_command("audit-queries")
@_common_options
@_scorer_options
@click.option("--plot-dir", type=click.Path(path_type=Path), help="写出绘图数据的目录")
def audit_queries(**options):
    """查询风格扫描：原文查询 + 9 种改写查询"""


@_command("audit-answers")
@_common_options
@_scorer_options
@click.option("--all-answers", is_flag=True, help="不过滤人工标注为错误的答案")
def audit_answers(**options):
    """答案风格审计：各问答系统的正确性得分与不公平分数"""


@cli.command("cache-gc")
@click.option("--cache-dir", type=click.Path(path_type=Path), default=None, help="磁盘缓存目录")
@click.option("--max-bytes", type=int, required=True, help="回收后的大小上限（字节）")
def gc_command(cache_dir: Optional[Path], max_bytes: int) -> None:
    """按最近使用时间回收缓存"""
    try:
        reclaimed = cache_gc(cache_dir or Path(config.CACHE_DIR), max_bytes)
    except Exception as e:
        code, line = diagnostic(e)
        click.echo(line, err=True)
        click.get_current_context().exit(code)
    click.echo(f"reclaimed {reclaimed} bytes")


def main() -> None:
    """console script 入口"""
    cli(prog_name="style-audit")


if __name__ == "__main__":
    main()
