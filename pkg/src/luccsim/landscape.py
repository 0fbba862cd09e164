"""The agent grid: geometry, stochastic initialization, and aggregation.

Farms are equal-area cells on a non-wrapping rectangular grid; border cells
simply have fewer Moore neighbors. Initialization consumes the run's seeded
stream in a fixed order (tenure shuffle, tech-level shuffle, then one
allocation draw per cell in row-major order) so a seed fully determines the
starting landscape.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum
from typing import Optional

from .config import ScenarioConfig
from .errors import ConfigurationError
from .rng import SplitMix64
from .tables import LandUse, ParameterTables, TechLevel, Wgc

__all__ = [
    "Tenure",
    "AgentState",
    "Landscape",
    "CycleRecord",
    "moore_neighbors",
    "initialize",
    "aggregate",
]

# Moore scan order: NW, N, NE, W, E, SW, S, SE. Best-neighbor ties break
# toward the earliest offset, so the order is part of the model contract.
MOORE_OFFSETS = ((-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1))


class Tenure(IntEnum):
    OWNER = 0
    TENANT = 1

    @property
    def code(self) -> str:
        return "O" if self is Tenure.OWNER else "T"


@dataclass(slots=True)
class AgentState:
    """One farmer cell.

    `allocation` is the farm-area percentage per land use in enum order and
    always sums to 100. The `last_*` fields and goal flags hold the most
    recent cycle's realized outcomes; before the first cycle they are the
    zero/false placeholders set here.
    """

    row: int
    col: int
    tenure: Tenure
    allocation: tuple[float, float, float]
    tl: TechLevel
    al_usd_per_ha: float
    last_profit_usd_per_ha: float = 0.0
    last_rl_pct: float = 0.0
    last_cal_usd_per_ha: float = 0.0
    econ_ok: bool = False
    env_ok: bool = False


@dataclass
class Landscape:
    """Dense row-major grid of agents plus the run's landscape constants."""

    rows: int
    cols: int
    cells: list[AgentState]
    et_pct: float
    rent_soy_tons: Optional[float]
    rent_usd_per_ha: Optional[float]
    neighbor_index: list[list[int]] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if len(self.cells) != self.rows * self.cols:
            raise ValueError("cell count does not match grid dimensions")
        self.neighbor_index = [
            [r * self.cols + c for r, c in moore_neighbors((i // self.cols, i % self.cols), (self.rows, self.cols))]
            for i in range(self.rows * self.cols)
        ]

    @property
    def n_agents(self) -> int:
        return self.rows * self.cols

    def cell_at(self, row: int, col: int) -> AgentState:
        return self.cells[row * self.cols + col]


@dataclass(frozen=True)
class CycleRecord:
    """Landscape aggregates realized within one cycle, before adaptation."""

    cycle: int
    wgc: Wgc
    cover_pct: dict[LandUse, float]
    mean_profit_usd_per_ha: float
    mean_rl_pct: float
    pct_econ_ok: float
    pct_env_ok: float
    tl_counts: dict[TechLevel, int]


def moore_neighbors(
    pos: tuple[int, int], dims: tuple[int, int]
) -> list[tuple[int, int]]:
    """Existing Moore neighbors of `pos`, in the fixed scan order."""
    row, col = pos
    rows, cols = dims
    if not (0 <= row < rows and 0 <= col < cols):
        raise ValueError(f"position {pos} outside grid {dims}")
    out = []
    for dr, dc in MOORE_OFFSETS:
        r, c = row + dr, col + dc
        if 0 <= r < rows and 0 <= c < cols:
            out.append((r, c))
    return out


def _largest_remainder_counts(shares: dict, members: list, total: int) -> dict:
    """Apportion `total` items to shares summing to 100; ties favor lower ordinals."""
    exact = {m: shares[m] * total / 100.0 for m in members}
    counts = {m: int(exact[m]) for m in members}
    leftover = total - sum(counts.values())
    by_remainder = sorted(members, key=lambda m: (-(exact[m] - counts[m]), m))
    for m in by_remainder[:leftover]:
        counts[m] += 1
    return counts


def _simplex_draw(rng: SplitMix64) -> tuple[float, float, float]:
    """Symmetric draw from the 2-simplex via sorted-uniform gaps."""
    u = rng.random()
    v = rng.random()
    if u > v:
        u, v = v, u
    return (u, v - u, 1.0 - v)


def _balance_to_targets(
    shares: list[list[float]], target: list[float], tol: float = 1e-12
) -> None:
    """Rescale simplex rows per component so the column means hit `target`.

    One rescale biases the means again once rows are renormalized, so the
    rescale/renormalize pair is iterated to its fixed point (a Sinkhorn-style
    balancing). Rows keep their relative heterogeneity; zero targets zero
    out the corresponding component.
    """
    n = len(shares)
    for _ in range(500):
        means = [sum(row[k] for row in shares) / n for k in range(3)]
        if all(abs(means[k] - target[k]) <= tol for k in range(3)):
            return
        scale = [
            (target[k] / means[k]) if target[k] > 0.0 and means[k] > 0.0 else 0.0
            for k in range(3)
        ]
        for row in shares:
            a = row[0] * scale[0]
            b = row[1] * scale[1]
            c = row[2] * scale[2]
            total = a + b + c
            if total <= 0.0:
                # the row had mass only in zeroed-out components (needs an
                # exactly-zero draw, so effectively unreachable)
                row[0], row[1], row[2] = target
                continue
            row[0] = a / total
            row[1] = b / total
            row[2] = c / total
    means = [sum(row[k] for row in shares) / n for k in range(3)]
    worst = max(abs(means[k] - target[k]) for k in range(3))
    raise ConfigurationError(
        f"initial cover balancing did not converge (residual {worst:.3e})"
    )


def initialize(
    config: ScenarioConfig, tables: ParameterTables, rng: SplitMix64
) -> Landscape:
    """Build the starting landscape for a scenario.

    Tenure counts are rounded to the nearest agent and assigned to shuffled
    positions; tech levels are apportioned by largest remainder and likewise
    shuffled. Each agent draws a random allocation from the symmetric
    simplex; the draws are then rescaled per land use so the landscape mean
    matches the configured cover shares, and renormalized per agent to sum
    to 100. Initial aspiration is `initial_al_factor` times the
    working-capital threshold of the agent's tech level.
    """
    config.validate()
    n = config.n_agents

    owner_count = int(config.owner_share_pct * n / 100.0 + 0.5)
    order = list(range(n))
    rng.shuffle(order)
    tenure = [Tenure.TENANT] * n
    for i in order[:owner_count]:
        tenure[i] = Tenure.OWNER

    tl_counts = _largest_remainder_counts(
        config.initial_tl_pct, list(TechLevel), n
    )
    tl_pool: list[TechLevel] = []
    for tl in TechLevel:
        tl_pool.extend([tl] * tl_counts[tl])
    rng.shuffle(tl_pool)

    draws = [list(_simplex_draw(rng)) for _ in range(n)]
    target = [config.initial_cover_pct[lu] / 100.0 for lu in LandUse]
    _balance_to_targets(draws, target)

    cells = []
    for i in range(n):
        share = draws[i]
        allocation = (100.0 * share[0], 100.0 * share[1], 100.0 * share[2])
        tl = tl_pool[i]
        cells.append(
            AgentState(
                row=i // config.grid_cols,
                col=i % config.grid_cols,
                tenure=tenure[i],
                allocation=allocation,
                tl=tl,
                al_usd_per_ha=config.initial_al_factor
                * tables.wct_usd_per_ha[tl],
            )
        )

    return Landscape(
        rows=config.grid_rows,
        cols=config.grid_cols,
        cells=cells,
        et_pct=config.et_pct,
        rent_soy_tons=config.rent_soy_tons,
        rent_usd_per_ha=config.rent_usd_per_ha,
    )


def aggregate(landscape: Landscape, cycle: int, wgc: Wgc) -> CycleRecord:
    """Landscape means and shares over the agents' current-cycle results.

    All farms are equal area, so cover is the plain mean of allocations and
    the profit/renewability aggregates are unweighted means.
    """
    n = landscape.n_agents
    cover_sums = [0.0, 0.0, 0.0]
    profit_sum = 0.0
    rl_sum = 0.0
    econ_count = 0
    env_count = 0
    tl_counts = {tl: 0 for tl in TechLevel}
    for cell in landscape.cells:
        a = cell.allocation
        cover_sums[0] += a[0]
        cover_sums[1] += a[1]
        cover_sums[2] += a[2]
        profit_sum += cell.last_profit_usd_per_ha
        rl_sum += cell.last_rl_pct
        econ_count += cell.econ_ok
        env_count += cell.env_ok
        tl_counts[cell.tl] += 1
    return CycleRecord(
        cycle=cycle,
        wgc=wgc,
        cover_pct={lu: cover_sums[lu] / n for lu in LandUse},
        mean_profit_usd_per_ha=profit_sum / n,
        mean_rl_pct=rl_sum / n,
        pct_econ_ok=100.0 * econ_count / n,
        pct_env_ok=100.0 * env_count / n,
        tl_counts=tl_counts,
    )
