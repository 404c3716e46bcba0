#!/usr/bin/env python3
"""Pick interpolation with a norm budget, nodes marching to the boundary,
and the pattern sweep behind non-separability of multiplier algebras."""

import numpy as np

from funcspace import (
    PickProblem,
    carleson_seq,
    pick_feasible,
    pick_min_norm,
    separability_probe,
)

print("=== Feasibility of a norm budget ===")
nodes, values = [0.0, 0.5], [0.0, 0.5]
for t in (0.9, 0.99, 1.0, 1.1):
    report = pick_feasible(PickProblem(nodes, values, bound=t))
    print(f"t = {t:4}: PSD = {report.is_psd}  (min eig {report.min_eigenvalue:+.3e})")
print("minimal budget (Schwarz-type rigidity):", pick_min_norm(nodes, values))
print()

print("=== Minimal norms for random targets ===")
rng = np.random.default_rng(2)
ns = rng.uniform(-0.7, 0.7, 4) + 1j * rng.uniform(-0.4, 0.4, 4)
vs = rng.normal(size=4) + 1j * rng.normal(size=4)
print("nodes:", np.round(ns, 3))
print("targets:", np.round(vs, 3))
print("min norm:", pick_min_norm(ns, vs))
print("max |target| (always a lower bound):", np.abs(vs).max())
print()

print("=== Nodes with exactly halving boundary gaps ===")
ys = carleson_seq(0.0, 8)
print("nodes:", ys)
print("gaps 1 - y:", 1.0 - ys)
print()

print("=== Sweeping every 0/1 pattern ===")
print(" m   patterns   max of min-norms   min pairwise gap   seconds")
import time

for m in range(1, 9):
    t0 = time.perf_counter()
    report = separability_probe(m, start=0.0)
    dt = time.perf_counter() - t0
    print(f"{m:2d}   {2**m:8d}   {report.max_min_norm:16.6f}   {report.min_pairwise_gap:16.1f}   {dt:7.2f}")
print()
print("Every pattern is interpolable at a finite budget, and distinct")
print("patterns stay sup-distance 1 apart on the nodes: pushed to infinitely")
print("many nodes this produces continuum-many uniformly separated")
print("multipliers, so no countable set can be dense among them.")
