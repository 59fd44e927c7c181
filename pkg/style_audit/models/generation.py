# -*- coding: utf-8 -*-
"""
风格改写相关数据模型
"""

from pydantic import BaseModel, ConfigDict, Field, field_validator

from style_audit.models.style import StyleId


class StylePrompt(BaseModel):
    """单个风格的改写指令"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    style: StyleId
    instruction: str

    @field_validator("style")
    @classmethod
    def _generated_only(cls, v: StyleId) -> StyleId:
        if v is StyleId.ORIGINAL:
            raise ValueError("original 没有改写指令")
        return v


class GenerationConfig(BaseModel):
    """改写生成配置"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    model_id: str = Field(..., min_length=1, description="对话模型 ID")
    temperature: float = Field(default=0.5, ge=0.0, description="采样温度")
    max_retries: int = Field(default=3, ge=0, description="输出为空或过短时的重试次数（传输错误由 HTTP 客户端重试）")
    parallelism: int = Field(default=8, ge=1, description="并发请求上限")
    min_length_ratio: float = Field(
        default=0.1, gt=0.0, lt=1.0, description="改写词数 / 原文词数 的下限"
    )
