# -*- coding: utf-8 -*-
"""
磁盘 JSON 缓存

布局：{cache_dir}/{namespace}/{sha256}.json
- gen: 改写结果  {"model", "style", "output"}
- emb: 嵌入向量  {"model", "dim", "vector"}

命中时刷新文件 mtime，作为 LRU 回收的"最近使用时间"。
"""

import hashlib
import json
import logging
import os
import tempfile
import threading
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, List, Optional, Set, Tuple, Union

from style_audit.errors import ConfigError
from style_audit.utils.logging_decorator import log_function

logger = logging.getLogger(__name__)

NAMESPACES = ("gen", "emb")


def cache_key(*parts: str) -> str:
    """sha256(part0 ∥ 0x00 ∥ part1 ∥ ...)"""
    return hashlib.sha256("\x00".join(parts).encode("utf-8")).hexdigest()


class DiskCache:
    """
    线程安全的键值缓存

    cache_dir 为 None 时仅在内存中保存（用于测试与一次性运行）。
    同一个键的 get_or_create 串行执行，保证一次运行内每个键至多一次真实请求。
    """

    def __init__(self, cache_dir: Optional[Union[str, Path]] = None):
        self.root: Optional[Path] = Path(cache_dir) if cache_dir is not None else None
        self._memory: Dict[Tuple[str, str], Dict[str, Any]] = {}
        self._locks: Dict[Tuple[str, str], threading.Lock] = {}
        self._guard = threading.Lock()
        self.touched: Set[Path] = set()
        self.hits = 0
        self.misses = 0
        if self.root is not None:
            try:
                for ns in NAMESPACES:
                    (self.root / ns).mkdir(parents=True, exist_ok=True)
            except OSError as e:
                raise ConfigError(f"缓存目录不可写: {self.root}: {e}", stage="harness") from e

    def path(self, ns: str, key: str) -> Optional[Path]:
        if self.root is None:
            return None
        return self.root / ns / f"{key}.json"

    def _lock_for(self, ns: str, key: str) -> threading.Lock:
        with self._guard:
            return self._locks.setdefault((ns, key), threading.Lock())

    def get(self, ns: str, key: str) -> Optional[Dict[str, Any]]:
        """读取缓存；命中时刷新 mtime"""
        p = self.path(ns, key)
        if p is None:
            payload = self._memory.get((ns, key))
        else:
            try:
                with open(p, "r", encoding="utf-8") as f:
                    payload = json.load(f)
                os.utime(p, None)
                self.touched.add(p)
            except FileNotFoundError:
                payload = None
            except (OSError, json.JSONDecodeError) as e:
                logger.warning(f"缓存文件损坏，视为未命中: {p}: {e}")
                payload = None
        with self._guard:
            if payload is None:
                self.misses += 1
            else:
                self.hits += 1
        return payload

    def put(self, ns: str, key: str, payload: Dict[str, Any]) -> None:
        """原子写入（临时文件 + rename）"""
        p = self.path(ns, key)
        if p is None:
            self._memory[(ns, key)] = payload
            return
        fd, tmp = tempfile.mkstemp(dir=p.parent, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as f:
                json.dump(payload, f, ensure_ascii=False)
            os.replace(tmp, p)
        except Exception:
            try:
                os.unlink(tmp)
            except OSError:
                pass
            raise
        self.touched.add(p)

    def get_or_create(
        self, ns: str, key: str, factory: Callable[[], Dict[str, Any]]
    ) -> Tuple[Dict[str, Any], bool]:
        """
        读取或生成缓存项

        Returns:
            (payload, created)；factory 抛出的异常原样向上传播，不写缓存
        """
        with self._lock_for(ns, key):
            payload = self.get(ns, key)
            if payload is not None:
                return payload, False
            payload = factory()
            self.put(ns, key, payload)
            return payload, True


def _entries(cache_dir: Path) -> List[Tuple[float, int, Path]]:
    out: List[Tuple[float, int, Path]] = []
    for ns in NAMESPACES:
        d = cache_dir / ns
        if not d.is_dir():
            continue
        for p in d.glob("*.json"):
            try:
                st = p.stat()
            except FileNotFoundError:
                continue
            out.append((st.st_mtime, st.st_size, p))
    return out


@log_function()
def cache_gc(
    cache_dir: Union[str, Path],
    max_bytes: int,
    protected: Iterable[Path] = (),
) -> int:
    """
    按最近使用时间回收缓存，直到总大小 ≤ max_bytes

    Args:
        cache_dir: 缓存根目录
        max_bytes: 大小上限（字节）
        protected: 本次运行访问过的条目，永不回收

    Returns:
        回收的字节数
    """
    root = Path(cache_dir)
    if not root.is_dir():
        raise ConfigError(f"缓存目录不存在: {root}", stage="harness")
    if max_bytes < 0:
        raise ConfigError("max_bytes 不能为负", stage="harness")

    keep = {Path(p).resolve() for p in protected}
    entries = _entries(root)
    total = sum(size for _, size, _ in entries)
    reclaimed = 0
    # 最久未使用的在前；mtime 相同时按路径排序保证确定性
    for mtime, size, p in sorted(entries, key=lambda e: (e[0], str(e[2]))):
        if total <= max_bytes:
            break
        if p.resolve() in keep:
            continue
        try:
            p.unlink()
        except FileNotFoundError:
            continue
        total -= size
        reclaimed += size

    logger.info(f"缓存回收 {reclaimed} 字节，剩余 {total} 字节")
    return reclaimed
