"""The per-cycle agent pipeline and run loop.

Each cropping cycle advances through four stages with barriers between
cross-agent reads:

1. outcome computation: profit and renewability from the pre-cycle state;
2. climate adjustment of the aspiration level (CAL);
3. goal evaluation against CAL and the ecological threshold;
4. adaptation for the next cycle: best-neighbor selection, land-use
   imitation, aspiration update, and technology update, all reading a
   frozen snapshot of stage 1-3 results.

Stages 1-3 are per-agent pure and are computed in one fused pass; stage 4
runs after the barrier. Within a stage, cells only read the frozen snapshot
and write their own slot, so chunked parallel execution is bit-identical to
sequential execution at any worker count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Optional

from .climate import wgc_for_cycle
from .config import ScenarioConfig, resolve_tables
from .landscape import (
    AgentState,
    CycleRecord,
    Landscape,
    Tenure,
    aggregate,
    initialize,
)
from .rng import SplitMix64
from .tables import LandUse, ParameterTables, TechLevel, Wgc

__all__ = [
    "CycleContext",
    "NeighborView",
    "compute_profit",
    "compute_rl",
    "climate_adjusted_aspiration",
    "evaluate_goals",
    "select_best_neighbor",
    "update_aspiration",
    "update_technology",
    "decide_land_use",
    "context_for",
    "run_cycle",
    "run_simulation",
    "RunResult",
]

_INCREMENTAL_OWN = 0.45  # weight on CAL when the aspiration was met
_DETRIMENTAL_OWN = 0.55  # weight on CAL when it was missed


@dataclass(frozen=True)
class CycleContext:
    """Everything exogenous to the agents within one cycle."""

    wgc: Wgc
    prices: Mapping[LandUse, float]
    tables: ParameterTables
    rent_usd_per_ha: float
    et_pct: float
    pricing_mode: str = "combined"
    wheat_price_usd_per_t: float = 153.0
    split_wheat_yield: Optional[Mapping[tuple[TechLevel, Wgc], float]] = None
    split_soy2_yield: Optional[Mapping[tuple[TechLevel, Wgc], float]] = None

    @cached_property
    def margins(self) -> tuple[tuple[float, float, float], ...]:
        """Per-hectare margin (gross income minus cost) by [tech level][land use].

        Combined mode prices the double crop's total yield at its single
        listed price; split mode prices user-supplied wheat and second-crop
        soybean component yields separately.
        """
        out = []
        for tl in TechLevel:
            row = []
            for lu in LandUse:
                cost = self.tables.cost_usd_per_ha[(lu, tl, self.wgc)]
                if lu is LandUse.WHEAT_SOY and self.pricing_mode == "split":
                    income = (
                        self.split_wheat_yield[(tl, self.wgc)]
                        * self.wheat_price_usd_per_t
                        + self.split_soy2_yield[(tl, self.wgc)]
                        * self.prices[LandUse.SOYBEAN]
                    )
                else:
                    income = (
                        self.tables.yield_t_per_ha[(lu, tl, self.wgc)]
                        * self.prices[lu]
                    )
                row.append(income - cost)
            out.append(tuple(row))
        return tuple(out)

    @cached_property
    def renewabilities(self) -> tuple[tuple[float, float, float], ...]:
        """Renewability share by [tech level][land use] at this cycle's weather."""
        return tuple(
            tuple(
                self.tables.renewability_pct[(lu, tl, self.wgc)]
                for lu in LandUse
            )
            for tl in TechLevel
        )


@dataclass(frozen=True)
class NeighborView:
    """Read-only snapshot of one neighbor's stage 1-3 results."""

    profit: float
    cal: float
    allocation: tuple[float, float, float]
    tl: TechLevel


def compute_profit(agent: AgentState, ctx: CycleContext) -> float:
    """Allocation-weighted per-hectare margin, minus rent for tenants."""
    a0, a1, a2 = agent.allocation
    m0, m1, m2 = ctx.margins[agent.tl]
    p = (a0 / 100.0) * m0 + (a1 / 100.0) * m1 + (a2 / 100.0) * m2
    if agent.tenure is Tenure.TENANT:
        p -= ctx.rent_usd_per_ha
    return p


def compute_rl(agent: AgentState, ctx: CycleContext) -> float:
    """Allocation-weighted renewability share, in percent."""
    a0, a1, a2 = agent.allocation
    r0, r1, r2 = ctx.renewabilities[agent.tl]
    return (a0 / 100.0) * r0 + (a1 / 100.0) * r1 + (a2 / 100.0) * r2


def climate_adjusted_aspiration(
    al: float, wgc: Wgc, tables: ParameterTables
) -> float:
    """Aspiration scaled by the weather adjustment factor (the CAL)."""
    return al * (1.0 + tables.alpha_wgc[wgc])


def evaluate_goals(
    p: float, cal: float, rl: float, et: float
) -> tuple[bool, bool]:
    """Economic and environmental goal flags; equality counts as fulfilled."""
    return (p >= cal, rl >= et)


def select_best_neighbor(
    views: list[NeighborView],
) -> Optional[NeighborView]:
    """Neighbor with the highest profit; ties go to the earliest scan position."""
    best = None
    for view in views:
        if best is None or view.profit > best.profit:
            best = view
    return best


def update_aspiration(
    cal: float,
    p: float,
    bn: Optional[tuple[float, float, TechLevel]],
    agent_tl: TechLevel,
    tables: ParameterTables,
) -> float:
    """Next-cycle aspiration level.

    Met aspirations move toward the realized profit quickly (55% weight on
    profit); missed ones either adopt the best neighbor's CAL scaled by the
    tech-level adjustment factor, when that neighbor out-earned the agent's
    own CAL, or decay slowly toward the realized profit (45% weight).
    `bn` is (neighbor CAL, neighbor profit, neighbor tech level).

    The weighted averages are evaluated as cal + w*(p - cal), which equals
    (1-w)*cal + w*p but cannot round past p. The direct form can overshoot
    by an ulp once the aspiration has converged onto the profit, flipping
    satisfied agents to unsatisfied and destabilizing an otherwise
    quiescent landscape.
    """
    if p >= cal:
        next_al = cal + (1.0 - _INCREMENTAL_OWN) * (p - cal)
    elif bn is not None and bn[1] > cal:
        bn_cal, _, bn_tl = bn
        next_al = bn_cal * (1.0 + tables.alpha_bn[(agent_tl, bn_tl)])
    else:
        next_al = cal + (1.0 - _DETRIMENTAL_OWN) * (p - cal)
    return next_al if next_al > 0.0 else 0.0


def update_technology(p: float, tables: ParameterTables) -> TechLevel:
    """Tech level affordable from this cycle's profit; never forces an exit."""
    wct = tables.wct_usd_per_ha
    if p >= wct[TechLevel.HIGH]:
        return TechLevel.HIGH
    if p >= wct[TechLevel.AVERAGE]:
        return TechLevel.AVERAGE
    return TechLevel.LOW


def decide_land_use(
    p: float,
    cal: float,
    bn: Optional[NeighborView],
    current_alloc: tuple[float, float, float],
) -> tuple[float, float, float]:
    """Copy the best neighbor's allocation when unsatisfied and out-earned.

    The environmental goal never alters the land-use decision.
    """
    if p < cal and bn is not None and bn.profit > cal:
        return bn.allocation
    return current_alloc


def context_for(
    config: ScenarioConfig, tables: ParameterTables, wgc: Wgc
) -> CycleContext:
    """Build one cycle's context from a scenario configuration."""
    return CycleContext(
        wgc=wgc,
        prices=config.prices,
        tables=tables,
        rent_usd_per_ha=config.rent_usd(),
        et_pct=config.et_pct,
        pricing_mode=config.pricing_mode,
        wheat_price_usd_per_t=config.wheat_price_usd_per_t,
        split_wheat_yield=config.split_wheat_yield,
        split_soy2_yield=config.split_soy2_yield,
    )


def _chunk_bounds(n: int, workers: int) -> list[tuple[int, int]]:
    step = (n + workers - 1) // workers
    return [(lo, min(lo + step, n)) for lo in range(0, n, step)]


def run_cycle(
    landscape: Landscape,
    ctx: CycleContext,
    *,
    cycle_index: int = 0,
    workers: int = 1,
) -> tuple[Landscape, CycleRecord]:
    """Advance the landscape by one cycle, in place.

    Returns the landscape and the record of outcomes realized within the
    cycle (aggregated at the stage-3 barrier, before adaptation). Output is
    bit-identical for any `workers` value.
    """
    cells = landscape.cells
    n = len(cells)
    neighbor_index = landscape.neighbor_index

    alloc = [c.allocation for c in cells]
    tl = [c.tl for c in cells]
    al = [c.al_usd_per_ha for c in cells]
    is_tenant = [c.tenure is Tenure.TENANT for c in cells]

    margins = ctx.margins
    renewabilities = ctx.renewabilities
    alpha = ctx.tables.alpha_wgc[ctx.wgc]
    rent = ctx.rent_usd_per_ha
    et = ctx.et_pct
    abn = [
        [ctx.tables.alpha_bn[(a, b)] for b in TechLevel] for a in TechLevel
    ]
    wct = ctx.tables.wct_usd_per_ha
    wct_avg, wct_high = wct[TechLevel.AVERAGE], wct[TechLevel.HIGH]

    profit = [0.0] * n
    rl = [0.0] * n
    cal = [0.0] * n
    econ = [False] * n
    env = [False] * n

    def stage_outcomes(lo: int, hi: int) -> None:
        for i in range(lo, hi):
            a0, a1, a2 = alloc[i]
            m0, m1, m2 = margins[tl[i]]
            p = (a0 / 100.0) * m0 + (a1 / 100.0) * m1 + (a2 / 100.0) * m2
            if is_tenant[i]:
                p -= rent
            r0, r1, r2 = renewabilities[tl[i]]
            profit[i] = p
            rl[i] = (a0 / 100.0) * r0 + (a1 / 100.0) * r1 + (a2 / 100.0) * r2
            c = al[i] * (1.0 + alpha)
            cal[i] = c
            econ[i] = p >= c
            env[i] = rl[i] >= et

    next_alloc: list = [None] * n
    next_tl: list = [TechLevel.LOW] * n
    next_al = [0.0] * n

    def stage_adapt(lo: int, hi: int) -> None:
        for i in range(lo, hi):
            best = -1
            best_p = 0.0
            for j in neighbor_index[i]:
                pj = profit[j]
                if best < 0 or pj > best_p:
                    best = j
                    best_p = pj
            p = profit[i]
            c = cal[i]
            if p >= c:
                a = c + (1.0 - _INCREMENTAL_OWN) * (p - c)
                next_alloc[i] = alloc[i]
            elif best >= 0 and best_p > c:
                a = cal[best] * (1.0 + abn[tl[i]][tl[best]])
                next_alloc[i] = alloc[best]
            else:
                a = c + (1.0 - _DETRIMENTAL_OWN) * (p - c)
                next_alloc[i] = alloc[i]
            next_al[i] = a if a > 0.0 else 0.0
            if p >= wct_high:
                next_tl[i] = TechLevel.HIGH
            elif p >= wct_avg:
                next_tl[i] = TechLevel.AVERAGE
            else:
                next_tl[i] = TechLevel.LOW

    if workers <= 1 or n < 2:
        stage_outcomes(0, n)
        _commit_outcomes(cells, profit, rl, cal, econ, env)
        record = aggregate(landscape, cycle_index, ctx.wgc)
        stage_adapt(0, n)
    else:
        bounds = _chunk_bounds(n, workers)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(lambda b: stage_outcomes(*b), bounds))
            _commit_outcomes(cells, profit, rl, cal, econ, env)
            record = aggregate(landscape, cycle_index, ctx.wgc)
            list(pool.map(lambda b: stage_adapt(*b), bounds))

    for i, cell in enumerate(cells):
        cell.allocation = next_alloc[i]
        cell.tl = next_tl[i]
        cell.al_usd_per_ha = next_al[i]
    return landscape, record


def _commit_outcomes(cells, profit, rl, cal, econ, env) -> None:
    for i, cell in enumerate(cells):
        cell.last_profit_usd_per_ha = profit[i]
        cell.last_rl_pct = rl[i]
        cell.last_cal_usd_per_ha = cal[i]
        cell.econ_ok = econ[i]
        cell.env_ok = env[i]


@dataclass
class RunResult:
    """A whole run: per-cycle records plus per-agent summary material."""

    config: ScenarioConfig
    records: list[CycleRecord]
    landscape: Landscape
    mean_profit_per_agent: list[float]
    mean_rl_per_agent: list[float]
    econ_agreement_pct: list[float]
    env_agreement_pct: list[float]
    agent_rows: Optional[list[tuple]] = field(default=None, repr=False)


def run_simulation(
    config: ScenarioConfig,
    tables: Optional[ParameterTables] = None,
    *,
    workers: int = 1,
    collect_agents: bool = False,
) -> RunResult:
    """Initialize from the seed and advance the configured number of cycles.

    The seeded stream is consumed by initialization first and then, for the
    random weather regime only, by one draw per cycle, so identical
    configurations replay identically at any worker count.
    """
    config.validate()
    if tables is None:
        tables = resolve_tables(config)
    rng = SplitMix64(config.seed)
    scape = initialize(config, tables, rng)
    n = scape.n_agents

    records: list[CycleRecord] = []
    agent_rows: Optional[list[tuple]] = [] if collect_agents else None
    profit_sums = [0.0] * n
    rl_sums = [0.0] * n
    econ_counts = [0] * n
    env_counts = [0] * n

    for t in range(config.cycles):
        wgc = wgc_for_cycle(config.climate, t, rng)
        ctx = context_for(config, tables, wgc)
        if collect_agents:
            pre_alloc = [c.allocation for c in scape.cells]
            pre_tl = [c.tl for c in scape.cells]
            pre_al = [c.al_usd_per_ha for c in scape.cells]
        _, record = run_cycle(scape, ctx, cycle_index=t, workers=workers)
        records.append(record)
        for i, cell in enumerate(scape.cells):
            profit_sums[i] += cell.last_profit_usd_per_ha
            rl_sums[i] += cell.last_rl_pct
            econ_counts[i] += cell.econ_ok
            env_counts[i] += cell.env_ok
        if collect_agents:
            for i, cell in enumerate(scape.cells):
                agent_rows.append(
                    (
                        t,
                        cell.row,
                        cell.col,
                        cell.tenure,
                        pre_alloc[i],
                        pre_tl[i],
                        pre_al[i],
                        cell.last_cal_usd_per_ha,
                        cell.last_profit_usd_per_ha,
                        cell.last_rl_pct,
                        cell.econ_ok,
                        cell.env_ok,
                    )
                )

    cycles = float(config.cycles)
    return RunResult(
        config=config,
        records=records,
        landscape=scape,
        mean_profit_per_agent=[s / cycles for s in profit_sums],
        mean_rl_per_agent=[s / cycles for s in rl_sums],
        econ_agreement_pct=[100.0 * c / cycles for c in econ_counts],
        env_agreement_pct=[100.0 * c / cycles for c in env_counts],
        agent_rows=agent_rows,
    )
