"""
Order splitting: cut each ATM's total demand into bounded deposits and place
them just in time.
"""

import logging
import math
from typing import List

from src.core.costing import atm_balance_sum, holding_cost
from src.models.instance import Atm, Instance
from src.models.split import (
    AtmSplit,
    ScheduledDeposits,
    ScheduledOption,
    SplitMode,
    SplitOption,
    SplitPolicy,
    SplitSchedule,
)

logger = logging.getLogger(__name__)


def near_equal_parts(total: int, k: int) -> List[int]:
    """Integer partition of total into k parts differing by at most 1, larger parts first"""
    base, extra = divmod(total, k)
    return [base + 1] * extra + [base] * (k - extra)


def enumerate_splits(total: int, policy: SplitPolicy) -> List[SplitOption]:
    """
    Every admissible deposit count k for a total, with its amounts.

    Split mode yields k from ceil(total/U) to floor(total/L), possibly none;
    no_split mode yields the single option k=1.

    Raises:
        ValueError: if total is not positive
    """
    if total <= 0:
        raise ValueError(f"total must be positive, got {total}")
    if policy.mode == SplitMode.NO_SPLIT:
        return [SplitOption(k=1, amounts=[total])]

    lowest = math.ceil(total / policy.upper_bound)
    highest = total // policy.lower_bound
    return [SplitOption(k=k, amounts=near_equal_parts(total, k)) for k in range(max(lowest, 1), highest + 1)]


def schedule_deposits(inst: Instance, atm: Atm, amounts: List[int]) -> ScheduledDeposits:
    """
    Place each amount in the latest period that keeps the balance nonnegative.

    Walking forward, amounts are dropped into period t only while the balance
    would otherwise end t below zero. Amounts never needed land in the last
    period. When the amounts cannot cover the withdrawals, everything goes to
    period 1 and the result is flagged infeasible.

    The split bounds apply to each amount, not to a period's total: several
    amounts may land in the same period, so d_t can exceed U (two 1.4B amounts
    needed on the same day make one 2.8B deposit).

    Example Usage:
        schedule_deposits(inst, atm, [50, 50])   # I_0=0, m=(50, 50) -> d=(50, 50)
    """
    p = inst.periods
    pending = sorted(amounts)
    deposits = [0] * p
    balance = atm.initial_balance

    for t, withdrawal in enumerate(atm.forecast_withdrawals):
        shortfall = withdrawal - balance
        if shortfall > 0:
            chosen = _cover(pending, shortfall)
            if chosen is None:
                return ScheduledDeposits(deposits=[sum(amounts)] + [0] * (p - 1), feasible=False)
            for amount in chosen:
                pending.remove(amount)
            deposits[t] += sum(chosen)
            balance += sum(chosen)
        balance -= withdrawal

    deposits[p - 1] += sum(pending)
    return ScheduledDeposits(deposits=deposits, feasible=True)


def _cover(pending: List[int], shortfall: int):
    """
    Fewest pending amounts reaching the shortfall, preferring the smaller ones;
    None when even all of them fall short.
    """
    by_size = sorted(pending, reverse=True)
    running = 0
    for n, amount in enumerate(by_size, start=1):
        running += amount
        if running >= shortfall:
            break
    else:
        return None
    # Same count, smallest sum that still covers
    chosen = sorted(pending)[:n]
    spares = sorted(pending)[n:]
    while sum(chosen) < shortfall:
        chosen[0] = spares.pop()
        chosen.sort()
    return chosen


def _option(inst: Instance, atm: Atm, option: SplitOption) -> ScheduledOption:
    scheduled = schedule_deposits(inst, atm, option.amounts)
    return ScheduledOption(
        k=option.k,
        amounts=option.amounts,
        deposits=scheduled.deposits,
        financial_proxy=holding_cost(inst, atm_balance_sum(atm, scheduled.deposits)),
        feasible=scheduled.feasible,
    )


def build_split_schedule(inst: Instance, policy: SplitPolicy) -> SplitSchedule:
    """
    Split and schedule every ATM with positive total demand.

    All options are kept; the chosen one is the feasible option with the
    lowest holding cost, smaller k on ties. With no feasible k the ATM falls
    back to a single deposit and a warning is recorded.
    """
    schedule = SplitSchedule(periods=inst.periods, policy=policy)
    for atm in inst.atms:
        if atm.total_demand <= 0:
            continue
        options = [_option(inst, atm, o) for o in enumerate_splits(atm.total_demand, policy)]
        feasible = [o for o in options if o.feasible]

        if feasible:
            best = min(feasible, key=lambda o: (o.financial_proxy, o.k))
            chosen_k = best.k
        else:
            if not any(o.k == 1 for o in options):
                options.insert(0, _option(inst, atm, SplitOption(k=1, amounts=[atm.total_demand])))
            chosen_k = 1
            message = f"ATM {atm.id}: no feasible split of {atm.total_demand} within [{policy.lower_bound}, {policy.upper_bound}], using one deposit"
            logger.warning(message)
            schedule.warnings.append(message)

        schedule.atms[atm.id] = AtmSplit(atm=atm.id, options=options, chosen_k=chosen_k)

    logger.info(f"Split schedule built ({policy.mode.value}) for {len(schedule.atms)} ATMs")
    return schedule
