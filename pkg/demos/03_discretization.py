"""Discretization: equal-frequency vs equal-width binning of the case table.

The Bayesian learner consumes small integer codes.  Continuous columns
(timings and coordinates) are cut into k intervals; NILL gets a dedicated
missing bin because an eventless tick is informative in itself.
"""

import numpy as np

from cogsig import (build_case_table, default_layout, default_profiles,
                    default_script, discretize_table, fit_equal_frequency,
                    fit_equal_width, generate_session)
from cogsig.features import concat_tables

print("The two fitting strategies on a skewed sample:")
values = sorted(np.random.default_rng(0).exponential(200.0, size=400).tolist())
ef = fit_equal_frequency(values, k=5, attribute="demo")
ew = fit_equal_width(values, k=5, attribute="demo")
print(f"  equal-frequency cuts: {[f'{b:7.1f}' for b in ef.boundaries]}")
print(f"  equal-width cuts:     {[f'{b:7.1f}' for b in ew.boundaries]}")
for name, scheme in (("equal-frequency", ef), ("equal-width", ew)):
    counts = np.bincount([scheme.apply(v) for v in values], minlength=scheme.k)
    print(f"  {name:<16} occupancy: {counts.tolist()}")
print(f"  missing value maps to the reserved bin: {ef.apply(None)} (= k)")

print("\nCoding a real two-user case table (equal-width, k=10):")
brisk, deliberate = default_profiles()
layout, script = default_layout(), default_script()
table = concat_tables([
    build_case_table(generate_session(brisk, script, seed=1, user_id="user1"),
                     layout, 0.01),
    build_case_table(generate_session(deliberate, script, seed=2, user_id="user2"),
                     layout, 0.01),
]).without_empty_rows()
coded = discretize_table(table, "equal-width", 10)
print(f"  columns ({len(coded.columns)}): {', '.join(coded.columns)}")
for column in coded.columns:
    encoder = coded.encoders[column]
    kind = "bins" if hasattr(encoder, "boundaries") else "categories"
    print(f"  {column:<20} cardinality {coded.cardinality(column):>2} ({kind})")

print("\nCode books are bijective; decoding then re-encoding is exact:")
book = coded.encoders["mouse_movement"]
print(f"  mouse_movement values: {book.values}")
codes = coded.column("mouse_movement")[:12].tolist()
print(f"  first codes {codes} -> {[book.decode(c) for c in codes]}")
