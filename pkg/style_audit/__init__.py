# -*- coding: utf-8 -*-
"""
Style Audit - 检索模型写作风格偏好审计工具

对文档/查询/答案的写作风格做改写，使用嵌入模型、BM25 等打分器排序，
计算平均排名与不公平分数。
"""

__version__ = "1.0.0"
