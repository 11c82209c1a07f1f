"""
Single-step versus multi-step forecasts, and saving a model
===========================================================

Single-step forecasts see the true past at every step; multi-step
forecasts feed their own predictions back in.
"""

import tempfile
from pathlib import Path

import numpy as np

from ltar import fit_with_differencing, forecast
from ltar.datagen import gen_ltar1_series
from ltar.evaluation import eval_csv, evaluate
from ltar.io import load_model, read_series, save_model, write_series

y = gen_ltar1_series(1100, seed=3)
train, test = y[:1000], y[1000:]
model = fit_with_differencing(train, p=2)

single = evaluate(model, train, test, "single")
multi = evaluate(model, train, test, "multi")
print("step  single   multi")
for j in range(0, 100, 20):
    print(f"{j + 1:4d}  {single.errors[j]:.3f}  {multi.errors[j]:.3f}")
# noise magnitude: E||E||_F^2 = 9 * Var(U(-1, 1)) = 3
print(f"mean single-step error {single.mean:.3f} vs noise scale {np.sqrt(3):.3f}")

with tempfile.TemporaryDirectory() as tmp:
    save_model(model, Path(tmp) / "model.json")
    write_series(test, Path(tmp) / "test.txt")
    again = load_model(Path(tmp) / "model.json")
    # the model keeps the end of its training data, so no history is needed
    same = forecast(again, None, 5).predictions == forecast(model, train, 5).predictions
    print("reloaded model forecasts identically:", same)
    print("test file round trip exact:", read_series(Path(tmp) / "test.txt") == test)
    print(eval_csv(single).splitlines()[:3])
