#!/usr/bin/env python3
"""Anatomy of the separable penalties: values, prox maps, subdifferentials.

The obstacle penalty charges lam per unit of dipping below a floor c; its
prox either shifts a point up by step*lam, clamps it exactly onto the floor,
or leaves it alone.  Landing *exactly* on the floor is what the multigrid
solver's adaptive masking keys on, so we show the three regimes explicitly
and cross-check every closed form against a brute-force search.
"""

import numpy as np

from proxmg import SeparableNonsmooth, brute_force_prox, select_subgradient

lam, c, step = 1.0, 0.0, 1.0
hinge = SeparableNonsmooth.hinge(lam, np.array([c]))

print("== hinge prox regimes (lam = 1, floor c = 0, step = 1) ==")
for v in (-2.0, -0.5, 0.5):
    out = hinge.prox(np.array([v]), step)[0]
    oracle = brute_force_prox(lambda t: lam * max(c - t, 0.0), v, step,
                              bracket=(v - 11, v + 11))
    regime = "shifted up" if out < c else ("clamped to floor" if out == c else "untouched")
    print(f"  v = {v:+.1f} -> {out:+.4f}  ({regime}; oracle {oracle:+.10f})")

print("\n== the same prox with a smaller step scales the shift ==")
print(f"  v = -2, step = 0.5 -> {hinge.prox(np.array([-2.0]), 0.5)[0]:+.4f}")

print("\n== subdifferential intervals ==")
for u in (-1.0, 0.0, 5.0):
    iv = hinge.subdiff(np.array([u]))
    tag = "set-valued" if iv.set_valued()[0] else "singleton"
    print(f"  at u = {u:+.1f}: [{iv.lo[0]:+.1f}, {iv.hi[0]:+.1f}]  ({tag})")
iv = hinge.subdiff(np.array([0.0]))
print(f"  selected subgradient at the kink (zero policy): "
      f"{select_subgradient(iv, 'zero')[0]:+.1f}")
print(f"  selected subgradient at the kink (midpoint):    "
      f"{select_subgradient(iv, 'midpoint')[0]:+.1f}")

print("\n== l1 penalty: soft threshold and sign intervals ==")
l1 = SeparableNonsmooth.l1(2.0)
v = np.array([5.0, -5.0, 0.5])
print(f"  prox of {v} at step 1: {l1.prox(v, 1.0)}")
iv = l1.subdiff(np.array([0.0]))
print(f"  interval at 0: [{iv.lo[0]:+.1f}, {iv.hi[0]:+.1f}]")

print("\n== 300 random cases against the golden-section oracle ==")
rng = np.random.Generator(np.random.PCG64(0))
worst = 0.0
for _ in range(300):
    v, lam_r = rng.uniform(-3, 3), rng.uniform(0, 2)
    c_r, step_r = rng.uniform(-1, 1), rng.uniform(0.1, 3)
    g = SeparableNonsmooth.hinge(lam_r, np.array([c_r]))
    got = g.prox(np.array([v]), step_r)[0]
    want = brute_force_prox(lambda t: lam_r * max(c_r - t, 0.0), v, step_r,
                            bracket=(v - 10 * step_r * lam_r - 1, v + 10 * step_r * lam_r + 1))
    worst = max(worst, abs(got - want))
print(f"  worst deviation: {worst:.2e}")
