"""Full benchmark grid with reference values.

Runs every series/beta/size/method cell at accuracy 0.1 with the standard
iteration cap and prints the markdown tables, including the published
iteration counts next to the measured ones.
"""

import time

from bicoord import BenchmarkSpec, render_markdown, run_benchmark

t0 = time.perf_counter()
report = run_benchmark(BenchmarkSpec())
elapsed = time.perf_counter() - t0

print(render_markdown(report))
print(f"\n{len(report.cells)} cells in {elapsed:.1f}s")
