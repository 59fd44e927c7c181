# -*- coding: utf-8 -*-
"""
运行配置模型
"""

from pathlib import Path
from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from style_audit.models.scorer import ScorerDescriptor
from style_audit.models.style import StyleId

Command = Literal["generate-styles", "stats", "audit-docs", "audit-queries", "audit-answers"]
AUDIT_COMMANDS = ("audit-docs", "audit-queries", "audit-answers")


class RunConfig(BaseModel):
    """
    一次运行的完整配置

    由 CLI 参数（可叠加 YAML 文件）构建；校验失败即配置错误，不会发出任何网络请求。
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    command: Command
    run_id: str = Field(..., min_length=1)
    corpus_path: Path
    scorers: List[ScorerDescriptor] = Field(default_factory=list)
    chat_endpoint: Optional[str] = Field(None, description="对话端点 base_url（generate-styles）")
    chat_model: Optional[str] = Field(None, description="改写使用的对话模型")
    temperature: float = Field(default=0.5, ge=0.0)
    max_retries: int = Field(default=3, ge=0)
    rewrite_queries: bool = False
    cache_dir: Path
    cache_max_bytes: Optional[int] = Field(None, ge=0, description="运行结束后执行缓存回收")
    out_path: Path
    out_format: Literal["json", "csv"] = "json"
    plot_dir: Optional[Path] = None
    parallelism: int = Field(default=8, ge=1)
    query_style: StyleId = StyleId.ORIGINAL
    side: Literal["document", "query", "answer"] = "document"
    correct_only: bool = True

    @model_validator(mode="after")
    def _check(self):
        if self.command in AUDIT_COMMANDS and not self.scorers:
            raise ValueError(f"{self.command} 至少需要一个 --scorer")
        if self.command == "audit-answers":
            bad = [d.label() for d in self.scorers if d.kind == "bm25"]
            if bad:
                raise ValueError(f"答案正确性评估不支持 BM25（取值无界）: {', '.join(bad)}")
        if self.command == "generate-styles" and not (self.chat_endpoint and self.chat_model):
            raise ValueError("generate-styles 需要 --chat-endpoint 与 --chat-model")
        return self
