# -*- coding: utf-8 -*-
"""
命令行层
"""

from style_audit.cli.main import cli, main

__all__ = ["cli", "main"]
