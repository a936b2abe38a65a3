"""Structure learning and posterior classification, step by step.

Arcs are chosen by thresholded information measures: an attribute joins
the class node when their mutual information exceeds t, and may take one
earlier attribute as an extra parent when their conditional mutual
information given the class exceeds t.  Classification multiplies the
class prior by each connected node's likelihood (in log space) and
normalizes.
"""

import numpy as np

from cogsig import (build_case_table, classify, conditional_mutual_information,
                    default_layout, default_profiles, default_script,
                    discretize_table, estimate_cpts, generate_session,
                    learn_structure, mutual_information, posterior)
from cogsig.bayes import aggregate_posterior, encode_cases
from cogsig.features import concat_tables

brisk, deliberate = default_profiles()
layout, script = default_layout(), default_script()
table = concat_tables([
    build_case_table(generate_session(brisk, script.repeated(3), seed=5,
                                      user_id="user1"), layout, 0.01),
    build_case_table(generate_session(deliberate, script.repeated(2), seed=6,
                                      user_id="user2"), layout, 0.01),
]).without_empty_rows()
coded = discretize_table(table, "equal-width", 10)

print("Mutual information of each attribute with the class (threshold t = 0.1):")
for column in coded.attribute_columns:
    mi = mutual_information(coded, column, "user_ID")
    print(f"  {column:<20} {mi:.4f} {'-> class edge' if mi > 0.1 else ''}")

structure = learn_structure(coded, t=0.1)
print(f"\nLearned structure: class node {structure.class_node!r}")
print(f"  class edges: {sorted(structure.class_edges)}")
print("  augmenting edges (parent -> child):")
for parent, child in sorted(structure.augment_edges):
    cmi = conditional_mutual_information(coded, parent, child, "user_ID")
    print(f"    {parent} -> {child}   (CMI given class = {cmi:.3f})")

net = estimate_cpts(structure, coded, smoothing_alpha=1.0)
print(f"\nPriors over {net.class_labels}: {np.round(net.priors, 3)}")

print("\nPer-tick posteriors for a few held-out style cases:")
example = {c: 0 for c in structure.attribute_nodes}
motion_book = coded.encoders["mouse_movement"]
for label, motion in (("a horizontal-motion tick", "Horizontal"),
                      ("an elliptical-motion tick", "Elliptical")):
    case = dict(example)
    case["mouse_movement"] = motion_book.encode(motion)
    case["mco"] = coded.encoders["mco"].encode(motion == "Elliptical")
    p = posterior(net, case)
    print(f"  {label:<26} -> {classify(net, case)} "
          f"(P = {dict(zip(net.class_labels, np.round(p, 3)))})")

print("\nWhole-session identification of a fresh deliberate-user session:")
fresh = build_case_table(
    generate_session(deliberate, script, seed=99, user_id="mystery"),
    layout, 0.01).without_empty_rows()
codes = encode_cases(net, fresh)
distribution = aggregate_posterior(net, codes)
winner = net.class_labels[int(distribution.argmax())]
print(f"  {len(fresh.rows)} cases -> {winner} "
      f"(session posterior {distribution.max():.4f})")
