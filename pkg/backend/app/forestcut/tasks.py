"""
Celery tasks: corpus chunks checked on the queue when FORESTCUT_DISPATCH=celery.
"""

import logging

from celery import shared_task

from app.forestcut.exceptions import ForestCutError
from app.forestcut.services.verify import check_chunk

logger = logging.getLogger(__name__)


@shared_task(bind=True)
def check_corpus_chunk(self, claim: str, lines: list, conjecture2_min_order: int):
    """Check one chunk of graph6 lines against a claim; returns scanned count and flagged graphs."""
    logger.info(
        "chunk_task_start",
        extra={"claim": claim, "lines": len(lines), "task_id": self.request.id},
    )
    try:
        return check_chunk(claim, lines, conjecture2_min_order)
    except ForestCutError as exc:
        logger.error("chunk_task_failed", extra={"claim": claim, **exc.to_dict()})
        raise
