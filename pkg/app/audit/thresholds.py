from typing import NamedTuple

import numpy as np

from app.audit.models import ScoreRecord, ThresholdStat
from app.common.errors import InputError


class SweepArrays(NamedTuple):
    tau: np.ndarray
    guesses: np.ndarray
    true_positives: np.ndarray
    members: int

    @property
    def precision(self) -> np.ndarray:
        return self.true_positives / self.guesses

    @property
    def recall(self) -> np.ndarray:
        return self.true_positives / self.members


def records_to_arrays(records: list[ScoreRecord]) -> tuple[np.ndarray, np.ndarray]:
    scores = np.fromiter((rec.score for rec in records), dtype=float, count=len(records))
    members = np.fromiter((rec.member for rec in records), dtype=bool, count=len(records))
    return scores, members


def sweep_arrays(scores: np.ndarray, members: np.ndarray) -> SweepArrays:
    """Guess member iff score >= tau, for every distinct tau, in one descending pass."""
    if scores.size == 0:
        raise InputError("cannot sweep thresholds over an empty record set")
    total_members = int(members.sum())
    if total_members == 0:
        raise InputError("record set contains no members")

    order = np.argsort(-scores, kind="stable")
    sorted_scores = scores[order]
    cum_tp = np.cumsum(members[order])
    # last position of each run of equal scores
    ends = np.flatnonzero(np.append(sorted_scores[1:] != sorted_scores[:-1], True))
    return SweepArrays(
        tau=sorted_scores[ends],
        guesses=ends + 1,
        true_positives=cum_tp[ends],
        members=total_members,
    )


def sweep_thresholds(records: list[ScoreRecord]) -> list[ThresholdStat]:
    sweep = sweep_arrays(*records_to_arrays(records))
    return [
        ThresholdStat(
            tau=float(tau),
            guesses=int(r),
            true_positives=int(tp),
            precision=float(prec),
            recall=float(rec),
        )
        for tau, r, tp, prec, rec in zip(
            sweep.tau, sweep.guesses, sweep.true_positives, sweep.precision, sweep.recall
        )
    ]
