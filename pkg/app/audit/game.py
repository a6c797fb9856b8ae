from collections.abc import Callable
from logging import getLogger
from typing import Any

import numpy as np

from app.audit.models import GamePoint, PairedAuditSet, ScoreRecord
from app.common.errors import SizeError

logger = getLogger(__name__)


def flip_coins(size: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.integers(0, 2, size=size).astype(bool)


def run_privacy_game(pairs: PairedAuditSet, seed: int) -> list[GamePoint]:
    """Flip one fair coin per index and show the member on heads, the generated point on tails."""
    m = pairs.size
    pools = (("member_pool", pairs.member_pool), ("generated_pool", pairs.generated_pool))
    for name, pool in pools:
        if len(pool) < m:
            raise SizeError(f"{name} has {len(pool)} elements, audit size is {m}")

    bits = flip_coins(m, seed)
    points = []
    for i, member in enumerate(bits.tolist()):
        source = pairs.member_pool[i] if member else pairs.generated_pool[i]
        points.append(GamePoint(index=i, id=source.id, payload=source.payload, member=member))
    logger.info("Privacy game over %d points: %d members", m, int(bits.sum()))
    return points


def score_points(points: list[GamePoint], scorer: Callable[[Any], float]) -> list[ScoreRecord]:
    return [
        ScoreRecord(id=point.id, score=float(scorer(point.payload)), member=point.member)
        for point in points
    ]
