#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
扫描结果存储

ResultStore 记录一次扫描中每个任务的结果或失败原因，提供线程安全的操作，
工作线程可以并发写入。最终报告按任务顺序在主线程中汇总。
"""

import logging
import threading
from datetime import datetime
from typing import Any, Dict, List, Optional

logger = logging.getLogger(__name__)


class ResultStore:
    """
    线程安全的扫描结果记录器

    参数:
        name (str): 扫描名称，用于日志与导出
        total_tasks (int): 任务总数
    """

    def __init__(self, name: str, total_tasks: int = 0):
        self.name = name
        # 线程锁，用于保证并发环境下的线程安全
        self.lock = threading.RLock()
        self._completed: Dict[int, Any] = {}
        self._failed: Dict[int, Dict[str, str]] = {}
        self._stats = {
            "total_tasks": total_tasks,
            "completed_tasks": 0,
            "failed_tasks": 0,
        }
        self.created_at = datetime.now().isoformat()
        logger.info(f"结果存储初始化完成: {name}, 任务数: {total_tasks}")

    def mark_completed(self, task_id: int, result: Any) -> bool:
        """
        标记任务为已完成

        参数:
            task_id (int): 任务序号
            result (Any): 任务结果

        返回:
            bool: 是否为首次标记
        """
        with self.lock:
            first = task_id not in self._completed
            self._completed[task_id] = result
            self._failed.pop(task_id, None)
            if first:
                self._stats["completed_tasks"] += 1
            logger.debug(f"[{self.name}] 已标记完成: 任务 {task_id}")
            return first

    def mark_failed(self, task_id: int, reason: str) -> bool:
        with self.lock:
            first = task_id not in self._failed
            self._failed[task_id] = {
                "timestamp": datetime.now().isoformat(),
                "reason": reason,
            }
            if first:
                self._stats["failed_tasks"] += 1
            logger.warning(f"[{self.name}] 已标记失败: 任务 {task_id}，原因: {reason}")
            return first

    def is_completed(self, task_id: int) -> bool:
        with self.lock:
            return task_id in self._completed

    def is_failed(self, task_id: int) -> bool:
        with self.lock:
            return task_id in self._failed

    def result(self, task_id: int) -> Optional[Any]:
        with self.lock:
            return self._completed.get(task_id)

    def failure_reason(self, task_id: int) -> Optional[str]:
        with self.lock:
            entry = self._failed.get(task_id)
            return entry["reason"] if entry else None

    def ordered_results(self) -> List[Any]:
        """按任务序号排列的已完成结果"""
        with self.lock:
            return [self._completed[k] for k in sorted(self._completed)]

    def get_failed_tasks(self) -> Dict[int, Dict[str, str]]:
        with self.lock:
            return {k: dict(v) for k, v in sorted(self._failed.items())}

    def get_stats(self) -> Dict[str, int]:
        with self.lock:
            return dict(self._stats)

    def update_stats(self, total_tasks: Optional[int] = None) -> Dict[str, int]:
        """重新计算统计信息"""
        with self.lock:
            if total_tasks is not None:
                self._stats["total_tasks"] = total_tasks
            self._stats["completed_tasks"] = len(self._completed)
            self._stats["failed_tasks"] = len(self._failed)
            return dict(self._stats)
