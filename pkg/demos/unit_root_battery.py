"""
Panel unit-root battery on levels and first differences
=======================================================

Runs the four panel tests (Fisher-PP, Fisher-ADF, IPS, LLC) on a pair of
log series from the bundled panel, then repeats the battery on a plainly
trending random-walk panel to show the level/difference contrast.
"""

import numpy as np

from panelmetrics.data import PanelDataset, VariableSeries, natural_log
from panelmetrics.fixture import synthetic_panel
from panelmetrics.report.render import build_unitroot_table, to_markdown
from panelmetrics.unitroot import run_battery

# 1. battery on the shipped panel (T = 9: tests that need longer series
#    report an error cell instead of aborting the run)
ds = synthetic_panel()
for name in ("prosperity", "innovation"):
    ds.add(natural_log(ds[name]))
battery = run_battery(ds, ("ln_prosperity", "ln_innovation"), det="c")
print(to_markdown(build_unitroot_table(battery)))

# 2. a synthetic contrast with a longer time dimension: pure random walks
#    should keep their unit root in levels and lose it after differencing
rng = np.random.default_rng(7)
n, width = 12, 40
entities = tuple(f"E{i}" for i in range(n))
periods = tuple(range(1980, 1980 + width))
walk = np.cumsum(rng.standard_normal((n, width)), axis=1)
ds2 = PanelDataset(entities=entities, periods=periods)
ds2.add(VariableSeries(name="walk", entities=entities, periods=periods, values=walk))
battery2 = run_battery(ds2, ("walk",), det="c", lags=0)
print()
print(to_markdown(build_unitroot_table(battery2)))

cell_level = battery2.cells[("walk", "level", "fisher-adf")]
cell_diff = battery2.cells[("walk", "difference", "fisher-adf")]
print(
    "fisher-adf p-values: level "
    f"{cell_level.result.p_value:.3f} (unit root kept), difference "
    f"{cell_diff.result.p_value:.3f} (rejected)"
)
