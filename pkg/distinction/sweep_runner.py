#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
多线程扫描执行器

任务放入队列，由线程池中的工作线程逐个取出处理，结果写入 ResultStore。
工作线程只读取 Setting 中已预热的缓存。
"""

import logging
import queue
import threading
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Optional, Sequence

from distinction.config import Setting
from distinction.result_store import ResultStore
from distinction.scalars import ComputationError

logger = logging.getLogger(__name__)

TaskFn = Callable[[Setting, Any], Any]


def worker(
    task_queue: queue.Queue,
    setting: Setting,
    fn: TaskFn,
    store: ResultStore,
):
    """
    工作线程函数，从队列中获取任务并处理。
    """
    while not task_queue.empty():
        try:
            task_id, item = task_queue.get_nowait()
        except queue.Empty:
            continue

        thread_name = threading.current_thread().name
        logger.debug(f"线程 {thread_name} 获取任务: {task_id}")

        try:
            if store.is_completed(task_id):
                logger.info(f"跳过已完成的任务: {task_id}")
                continue
            store.mark_completed(task_id, fn(setting, item))
        except ComputationError as e:
            store.mark_failed(task_id, f"{type(e).__name__}: {e}")
            logger.error(f"线程 {thread_name} 任务 {task_id} 失败: {e}")
        except Exception as e:
            store.mark_failed(task_id, f"未知异常: {e}")
            logger.critical(f"线程 {thread_name} 发生严重错误: {e}", exc_info=True)
        finally:
            task_queue.task_done()


def run_sweep(
    setting: Setting,
    tasks: Sequence[Any],
    fn: TaskFn,
    workers: Optional[int] = None,
    name: str = "sweep",
) -> ResultStore:
    """
    并行处理全部任务

    参数:
        setting: 预热后的计算环境
        tasks: 任务列表，任务序号即列表下标
        fn: 处理单个任务的函数 fn(setting, item)
        workers: 线程数，默认取配置中的 workers

    返回:
        ResultStore: 记录了每个任务结果的存储
    """
    max_workers = max(1, workers or setting.config.workers)
    store = ResultStore(name, len(tasks))
    if not tasks:
        logger.warning(f"{name}: 没有任务需要处理")
        return store

    task_queue: queue.Queue = queue.Queue()
    for task in enumerate(tasks):
        task_queue.put(task)

    logger.info(f"===== 开始扫描 {name}: {len(tasks)} 个任务, {max_workers} 个线程 =====")
    with ThreadPoolExecutor(max_workers=max_workers, thread_name_prefix=f"{name[:8]}") as executor:
        futures = [
            executor.submit(worker, task_queue, setting, fn, store)
            for _ in range(min(max_workers, len(tasks)))
        ]
        for future in futures:
            future.result()

    task_queue.join()

    stats = store.update_stats()
    logger.info(f"统计: 总任务 {stats['total_tasks']}, "
                f"已完成 {stats['completed_tasks']}, "
                f"失败 {stats['failed_tasks']}")
    return store
