"""
Recovering a known tensor autoregression
========================================

Simulate 2000 observations of a 3x3x3 L-TAR(1) process with uniform noise,
fit it under each transform and compare the estimates with the truth.
"""

import numpy as np

from ltar import TransformKind, ltar_fit, simulate_ltar
from ltar.datagen import gen_ltar1_series, ground_truth_theta, random_stable_model

np.set_printoptions(precision=3, suppress=True)
truth = ground_truth_theta()

for kind in TransformKind:
    y = gen_ltar1_series(2000, seed=7, transform=kind)
    model = ltar_fit(y, p=1, transform=kind)
    A = model.A[0].data
    print(f"--- {kind.value}")
    for k in range(3):
        print(f"slice {k} of A1:\n{A[:, :, k]}")
    dev = max(np.abs(A - truth.A[0].data).max(), np.abs(model.C.data - truth.C.data).max())
    print(f"C tubes: {model.C.data[:, 0, :].ravel()}")
    print(f"largest deviation from the truth: {dev:.4f}\n")

# the noise is what keeps the estimates off the truth; without it they are exact
# up to rounding once the dynamics are rich enough to identify every slice
rich = random_stable_model(4, 4, 2, seed=1)
fit = ltar_fit(simulate_ltar(rich, 500, seed=1), 2)
err = max(np.abs(a.data - b.data).max() for a, b in zip(fit.A, rich.A))
print(f"noiseless 4x4x4 L-TAR(2): max coefficient error {err:.1e}")
