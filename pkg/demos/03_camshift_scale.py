# CamShift following a wheel that moves away
#
# Three 60-frame sequences shrink the wheel to 1, 1/2 and 1/3 of its size,
# a stand-in for a wheel 1, 2 and 3 m from the camera. The search window
# should shrink with it.

# %%
import math

import wheeltrack as wt

cfg = wt.PipelineConfig(hough=wt.HoughParams(max_radius=25))

# %%
from wheeltrack.pipeline import track_frames

final = {}
for end in (1.0, 0.5, 1 / 3):
    spec = wt.SynthSpec(frames=60, scale=wt.linear_profile(1.0, end, 60), noise_sigma=2.0, rng_seed=7)
    frames, truth = wt.synth_sequence(spec)
    hit, roi = wt.detect_and_seed(frames[0], cfg)
    states, _ = track_frames(frames, roi, cfg, hit)
    err = max(math.hypot(s.centroid[0] - t["cx"], s.centroid[1] - t["cy"]) for s, t in zip(states, truth))
    final[end] = states[-1].window
    print(f"scale to {end:.2f}: final window {states[-1].window.w}x{states[-1].window.h}, "
          f"worst centroid error {err:.2f} px")

# %% [markdown]
# Window widths relative to the unscaled run:

# %%
base = final[1.0].w
print({round(k, 3): round(v.w / base, 3) for k, v in final.items()})
