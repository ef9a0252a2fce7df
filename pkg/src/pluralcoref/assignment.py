"""CEAF-style chain similarity and optimal one-to-one chain alignment."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Hashable, Sequence

import numpy as np


@dataclass(frozen=True)
class AlignmentResult:
    """Optimal partial injection between gold rows and system columns.

    ``pairs`` holds (gold, system) identifiers of the positive-weight
    matches, sorted by gold identifier.
    """

    pairs: tuple[tuple[Hashable, Hashable], ...]
    total_similarity: float
    unmatched_gold: frozenset
    unmatched_system: frozenset
    weights: tuple[float, ...] = ()

    def gold_to_system(self) -> dict:
        return dict(self.pairs)

    def system_to_gold(self) -> dict:
        return {s: g for g, s in self.pairs}

    def to_dict(self) -> dict:
        return {
            "pairs": [{"gold": g, "system": s, "phi4": w}
                      for (g, s), w in zip(self.pairs, self.weights)],
            "total_similarity": self.total_similarity,
            "unmatched_gold": sorted(self.unmatched_gold),
            "unmatched_system": sorted(self.unmatched_system),
        }


def phi4(gold_chain, sys_chain) -> float:
    """Entity similarity 2|K & R| / (|K| + |R|)."""
    gold_chain, sys_chain = set(gold_chain), set(sys_chain)
    if not gold_chain or not sys_chain:
        raise ValueError("phi4 is undefined for empty chains")
    return 2 * len(gold_chain & sys_chain) / (len(gold_chain) + len(sys_chain))


def _hungarian_min(cost: np.ndarray) -> list[int]:
    """Kuhn-Munkres with potentials on a square cost matrix.

    Returns ``assign`` with ``assign[row] = column``. Rows are inserted in
    ascending order and ties pick the lowest column, which makes the result
    a deterministic function of the matrix.
    """
    n = cost.shape[0]
    inf = math.inf
    u = [0.0] * (n + 1)
    v = [0.0] * (n + 1)
    p = [0] * (n + 1)  # p[col] = row matched to col (1-based, 0 = free)
    way = [0] * (n + 1)
    c = cost.tolist()
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv = [inf] * (n + 1)
        used = [False] * (n + 1)
        while True:
            used[j0] = True
            i0 = p[j0]
            delta = inf
            j1 = 0
            row = c[i0 - 1]
            ui0 = u[i0]
            for j in range(1, n + 1):
                if not used[j]:
                    cur = row[j - 1] - ui0 - v[j]
                    if cur < minv[j]:
                        minv[j] = cur
                        way[j] = j0
                    if minv[j] < delta:
                        delta = minv[j]
                        j1 = j
            for j in range(n + 1):
                if used[j]:
                    u[p[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while True:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
            if j0 == 0:
                break
    assign = [0] * n
    for j in range(1, n + 1):
        assign[p[j] - 1] = j - 1
    return assign


def max_weight_matching(weights, gold_ids: Sequence | None = None,
                        system_ids: Sequence | None = None) -> AlignmentResult:
    """Maximum-weight one-to-one matching of rows (gold) to columns (system).

    The matrix is padded to square with zeros and solved exactly. Pairs of
    weight 0 are left out of the result; they cannot change the total.
    """
    w = np.asarray(weights, dtype=float)
    if w.ndim != 2:
        if w.size == 0:
            w = w.reshape(0, 0)
        else:
            raise ValueError("weights must be a 2-d matrix")
    if not np.all(np.isfinite(w)):
        raise ValueError("weights must be finite")
    if np.any(w < 0):
        raise ValueError("weights must be non-negative")
    n_gold, n_sys = w.shape
    gold_ids = list(range(n_gold)) if gold_ids is None else list(gold_ids)
    system_ids = list(range(n_sys)) if system_ids is None else list(system_ids)
    if len(gold_ids) != n_gold or len(system_ids) != n_sys:
        raise ValueError("id lists do not match the matrix shape")

    pairs, pair_weights = [], []
    n = max(n_gold, n_sys)
    if n and w.any():
        square = np.zeros((n, n))
        square[:n_gold, :n_sys] = w
        assign = _hungarian_min(-square)
        for g in range(n_gold):
            s = assign[g]
            if s < n_sys and w[g, s] > 0:
                pairs.append((gold_ids[g], system_ids[s]))
                pair_weights.append(float(w[g, s]))
    total = 0.0
    for x in pair_weights:
        total += x
    matched_g = {g for g, _ in pairs}
    matched_s = {s for _, s in pairs}
    return AlignmentResult(
        pairs=tuple(pairs),
        total_similarity=total,
        unmatched_gold=frozenset(g for g in gold_ids if g not in matched_g),
        unmatched_system=frozenset(s for s in system_ids if s not in matched_s),
        weights=tuple(pair_weights),
    )


def similarity_matrix(gold_chains: Sequence, sys_chains: Sequence) -> np.ndarray:
    """phi4 between every gold and system chain (sets of mention keys)."""
    gold_sets = [set(k) for k in gold_chains]
    sys_sets = [set(r) for r in sys_chains]
    out = np.zeros((len(gold_sets), len(sys_sets)))
    index: dict = {}
    for j, r in enumerate(sys_sets):
        for key in r:
            index.setdefault(key, []).append(j)
    for i, k in enumerate(gold_sets):
        for key in k:
            for j in index.get(key, ()):
                out[i, j] += 1
        for j in np.flatnonzero(out[i]):
            out[i, j] = 2 * out[i, j] / (len(k) + len(sys_sets[j]))
    return out


def align_chains(gold_chains: dict, sys_chains: dict) -> AlignmentResult:
    """Align two ``{chain id: set of mention keys}`` maps under phi4."""
    gold_ids = list(gold_chains)
    sys_ids = list(sys_chains)
    sim = similarity_matrix([gold_chains[g] for g in gold_ids],
                            [sys_chains[s] for s in sys_ids])
    return max_weight_matching(sim, gold_ids, sys_ids)
