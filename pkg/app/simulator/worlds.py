from logging import getLogger
from typing import NamedTuple

import numpy as np

from app.audit.models import ScoreRecord
from app.common.errors import InfiniteClosenessError
from app.simulator.models import CategoricalWorld, WorldSample

logger = getLogger(__name__)

DEFAULT_SYMBOLS = 8
DEFAULT_CONCENTRATION = 50.0
DEFAULT_UNIFORM_SHARE = 0.16


def default_world(seed: int = 0) -> CategoricalWorld:
    """Uniform data over 8 symbols and a Dirichlet-perturbed generator.

    Mixing in a uniform share of 0.16 keeps every generator entry at 0.02 or
    more, so the true closeness stays small and finite.
    """
    rng = np.random.default_rng(seed)
    perturbed = rng.dirichlet(np.full(DEFAULT_SYMBOLS, DEFAULT_CONCENTRATION))
    gen = (1.0 - DEFAULT_UNIFORM_SHARE) * perturbed + DEFAULT_UNIFORM_SHARE / DEFAULT_SYMBOLS
    gen = gen / gen.sum()
    return CategoricalWorld(
        symbol_probs_data=[1.0 / DEFAULT_SYMBOLS] * DEFAULT_SYMBOLS,
        symbol_probs_gen=gen.tolist(),
    )


def log_ratios(world: CategoricalWorld) -> np.ndarray:
    """ln(p_D(k) / p_G(k)) per symbol; raises if some ratio is unbounded."""
    data = np.asarray(world.symbol_probs_data)
    gen = np.asarray(world.symbol_probs_gen)
    unbounded = (gen == 0.0) & (data > 0.0)
    if unbounded.any():
        raise InfiniteClosenessError(
            f"generator assigns zero mass to symbol(s) {np.flatnonzero(unbounded).tolist()} "
            "that the data distribution can produce"
        )
    ratios = np.full(data.shape, -np.inf)
    support = data > 0.0
    ratios[support] = np.log(data[support] / gen[support])
    return ratios


def true_c(world: CategoricalWorld) -> float:
    return max(0.0, float(np.max(log_ratios(world))))


def baseline_scores_by_symbol(world: CategoricalWorld) -> np.ndarray:
    ratios = log_ratios(world)
    finite = np.isfinite(ratios)
    # symbols only the generator produces score below every other symbol
    return np.where(finite, ratios, np.min(ratios[finite]) - 1.0)


class WorldArrays(NamedTuple):
    members: np.ndarray
    symbols: np.ndarray
    baseline: np.ndarray
    mia: np.ndarray


def draw_world(world: CategoricalWorld, rng: np.random.Generator) -> WorldArrays:
    """One privacy game in the world, as index-aligned arrays."""
    m = world.m
    members = rng.integers(0, 2, size=m).astype(bool)
    from_data = rng.choice(world.symbols, size=m, p=world.symbol_probs_data)
    from_gen = rng.choice(world.symbols, size=m, p=world.symbol_probs_gen)
    symbols = np.where(members, from_data, from_gen)
    loss = rng.normal(-world.loss_separation * members, world.loss_noise)

    baseline = baseline_scores_by_symbol(world)[symbols]
    mia = baseline + world.mia_weight * (-loss) / world.loss_noise
    return WorldArrays(members=members, symbols=symbols, baseline=baseline, mia=mia)


def make_world_sample(world: CategoricalWorld, seed: int) -> WorldSample:
    c_star = true_c(world)
    arrays = draw_world(world, np.random.default_rng(seed))
    ids = [f"x{i:06d}" for i in range(world.m)]
    members = arrays.members.tolist()
    return WorldSample(
        baseline_records=[
            ScoreRecord(id=i, score=s, member=b)
            for i, s, b in zip(ids, arrays.baseline.tolist(), members)
        ],
        mia_records=[
            ScoreRecord(id=i, score=s, member=b)
            for i, s, b in zip(ids, arrays.mia.tolist(), members)
        ],
        true_c=c_star,
    )
