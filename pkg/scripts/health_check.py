#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
快速端点健康检查脚本
安装本包后使用（pip install -e .）：python scripts/health_check.py [--embedding-model M] [--chat-model M]

对配置的 OpenAI 兼容端点各发一次最小请求。
"""

import sys

import click

from style_audit import config
from style_audit.clients.chat import ChatClient
from style_audit.clients.embedding import EmbeddingClient
from style_audit.errors import EndpointError


def check_embedding(base_url: str, model: str) -> bool:
    """检查嵌入端点"""
    click.echo(f"📡 检查嵌入端点: {base_url} ({model})")
    client = EmbeddingClient(base_url, max_retries=0)
    try:
        (vector,) = client.embed(model, ["health check"])
        click.echo(f"   ✅ 嵌入端点正常（维度 {len(vector)}）")
        return True
    except EndpointError as e:
        click.echo(f"   ❌ 嵌入端点不可用: {e}")
        return False
    finally:
        client.close()


def check_chat(base_url: str, model: str) -> bool:
    """检查对话端点"""
    click.echo(f"📡 检查对话端点: {base_url} ({model})")
    client = ChatClient(base_url, max_retries=0)
    try:
        client.complete(model, [{"role": "user", "content": "ping"}], 0.0)
        click.echo("   ✅ 对话端点正常")
        return True
    except EndpointError as e:
        click.echo(f"   ❌ 对话端点不可用: {e}")
        return False
    finally:
        client.close()


@click.command()
@click.option("--base-url", default=config.BASE_URL, show_default=True, help="端点 base_url")
@click.option("--embedding-model", help="要探测的嵌入模型")
@click.option("--chat-model", help="要探测的对话模型")
def main(base_url: str, embedding_model: str, chat_model: str) -> None:
    click.echo("\n🔍 运行端点健康检查\n")
    if not (embedding_model or chat_model):
        click.echo("💡 至少指定 --embedding-model 或 --chat-model")
        sys.exit(2)

    results = []
    if embedding_model:
        results.append(check_embedding(base_url, embedding_model))
    if chat_model:
        results.append(check_chat(base_url, chat_model))

    click.echo("\n" + "=" * 50)
    if all(results):
        click.echo("✅ 所有端点正常")
        sys.exit(0)
    click.echo("❌ 部分端点不可用")
    click.echo("\n💡 提示:")
    click.echo(f"   - 检查 STYLE_AUDIT_BASE_URL 与 {config.API_KEY_ENV} 配置")
    sys.exit(1)


if __name__ == "__main__":
    main()
