# Detecting the hub of a wheel with the Hough gradient method
#
# A synthetic wheel stands in for a webcam frame: a dark tyre ring of radius
# 107 around a green hub of radius 17. The detector votes for circle centres
# along each edge pixel's gradient line, so one radius limit is enough to pick
# either circle.

# %%
import sys
import tempfile
from pathlib import Path

import numpy as np

import wheeltrack as wt

out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(tempfile.mkdtemp(prefix="wt-demo-"))
out.mkdir(parents=True, exist_ok=True)

frames, truth = wt.synth_sequence(wt.SynthSpec(noise_sigma=2.0, rng_seed=1))
frame = frames[0]
gray = wt.gaussian_blur(wt.to_grayscale(frame), 1.0)
print("true centre", truth[0]["cx"], truth[0]["cy"])

# %% [markdown]
# With the maximum radius capped at 25 px only the hub can collect votes and
# pass the radius check.

# %%
strict = wt.HoughParams(dp=1, min_dist=18, canny_high=50, acc_threshold=33, max_radius=25)
hub = wt.detect_circles(gray, strict)
for h in hub:
    print(f"hub: centre ({h.cx:g}, {h.cy:g}) radius {h.radius} votes {h.votes}")

# %% [markdown]
# Lifting the cap lets the tyre win the radius histogram at the same centre.

# %%
wide = wt.detect_circles(gray, wt.HoughParams(max_radius=0))
print("unbounded radii:", [h.radius for h in wide])

# %% [markdown]
# A tread pattern adds edges that loose settings mistake for circles.

# %%
lugs = wt.synth_sequence(wt.SynthSpec(wheel=wt.WheelSpec(lugs=12)))[0][0]
lug_gray = wt.to_grayscale(lugs)
loose = wt.detect_circles(lug_gray, wt.HoughParams(min_dist=75, acc_threshold=20))
print(f"loose settings: {len(loose)} circles, strict: {len(wt.detect_circles(lug_gray, strict))}")

wt.save_pnm(wt.annotate(frame, hub), out / "hub.ppm")
wt.save_pnm(wt.annotate(lugs, loose), out / "false_circles.ppm")
print("annotated frames in", out)
