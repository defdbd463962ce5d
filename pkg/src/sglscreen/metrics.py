"""Screening-performance metrics computed from path solutions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class RunMetrics:
    improvement_factor: float
    input_prop_vars: float
    input_prop_groups: float
    card_Av: np.ndarray
    card_Cv: np.ndarray
    card_Ov: np.ndarray
    card_Kv: np.ndarray
    card_Ag: np.ndarray
    card_Cg: np.ndarray
    card_Og: np.ndarray
    efficiency_vars: float
    l2_to_noscreen: float
    failed_convergence: float


def _card_og(states, groups):
    """O_g: groups with at least one variable present in O_v."""
    out = np.zeros(len(states), dtype=np.int64)
    for k, st in enumerate(states):
        ov = st.optimization_set
        out[k] = np.unique(groups.group_of[ov]).size if ov.size else 0
    return out


def compute_metrics(screened, baseline, design):
    """Aggregate the screening metrics of ``screened`` against ``baseline``
    (a rule=none run on the same data and lambda grid).

    improvement_factor is total baseline wall time over total screened wall
    time; input proportions and the l2 distance between fitted values are
    arithmetic means over path points.
    """
    if screened.lambdas.size != baseline.lambdas.size or not np.allclose(
            screened.lambdas, baseline.lambdas, rtol=1e-12, atol=0.0):
        raise ValueError("path solutions are on different lambda grids")
    groups = design.groups
    p, m = groups.p, groups.m
    states = screened.screen_states

    card_Av = np.array([s.active_vars.size for s in states])
    card_Cv = np.array([s.candidate_vars.size for s in states])
    card_Ov = np.array([s.optimization_set.size for s in states])
    card_Kv = np.array([sum(v.size for v in s.kkt_violations)
                        for s in states])
    card_Ag = np.array([s.active_groups.size for s in states])
    card_Cg = np.array([s.candidate_groups.size for s in states])
    card_Og = _card_og(states, groups)

    live = card_Av > 0
    efficiency = float(np.mean(card_Ov[live] / card_Av[live])) \
        if live.any() else float("nan")

    dists = [float(np.linalg.norm(design.X @ (bs - bb)))
             for bs, bb in zip(screened.betas, baseline.betas)]

    return RunMetrics(
        improvement_factor=float(baseline.timings.sum() /
                                 screened.timings.sum()),
        input_prop_vars=float(card_Ov.mean() / p),
        input_prop_groups=float(card_Og.mean() / m),
        card_Av=card_Av, card_Cv=card_Cv, card_Ov=card_Ov, card_Kv=card_Kv,
        card_Ag=card_Ag, card_Cg=card_Cg, card_Og=card_Og,
        efficiency_vars=efficiency,
        l2_to_noscreen=float(np.mean(dists)),
        failed_convergence=float(np.mean(~screened.converged)),
    )
