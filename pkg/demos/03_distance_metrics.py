"""Per-clip metrics: cosine distance, nearest reference, centroid similarity."""

import numpy as np

from stylegap import centroid_similarity, cosine_distance, min_distance, min_distance_condition

a = np.array([1.0, 0.0])
b = np.array([0.0, 1.0])
print("orthogonal:", cosine_distance(a, b))          # 1.0
print("antipodal: ", cosine_distance(a, -3.0 * a))   # 2.0, scale-invariant

# Nearest-reference attribution: each generated clip is scored by its
# cosine distance to the closest reference clip.
refs = np.array([[1.0, 0.0], [0.0, 1.0]])
print("diagonal d_min:", min_distance(np.array([1.0, 1.0]), refs))  # 1 - 1/sqrt(2)

# A condition is summarized by the raw median of its per-clip values
# (even counts average the two central order statistics).
gens = np.array([[1.0, 0.1], [0.4, 1.0], [1.0, 1.0], [-1.0, 0.2]])
result = min_distance_condition(gens, refs, ids=["g1", "g2", "g3", "g4"])
for clip_id, value in result.per_clip:
    print(f"  {clip_id}: d_min = {value:.4f}")
print("median:", round(result.median, 4))

# Centroid similarity: mean cosine similarity to the average reference.
print("centroid similarity:", centroid_similarity(gens, refs))
