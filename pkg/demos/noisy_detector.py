"""
Unreliable detections and the weighting sweep
=============================================

The ``dropout`` preset loses a fifth of its detections and jitters the rest.
Missed detections leave agents coasting on their motion model; mean-shift
pulls them back onto their colour.  We then vary the overlap/colour weighting
on the crossing scene.
"""

from occlusia import Config, TrajectorySet, evaluate, run_sequence
from occlusia.synth import crossing, dropout, synth_scenario

scene = synth_scenario(dropout(seed=7))
results = run_sequence(scene.detections, scene.frames)
report = evaluate(scene.gt, TrajectorySet.from_results(results))
print("detections kept:", sum(map(len, scene.detections.values())), "of", 2 * scene.spec.frames)
print(report.row(percent=True))
coasting = sum(s == "P" for r in results for _, _, s in r.outputs)
print("predicted (coasting) outputs:", coasting)

cross = synth_scenario(crossing())
print("alpha1  IDS (verification on / off)")
for a1 in (0.0, 0.25, 0.5, 0.75, 1.0):
    cfg = Config().updated(assoc__alpha1=a1, assoc__alpha2=1.0 - a1)
    row = []
    for enabled in (True, False):
        res = run_sequence(cross.detections, cross.frames, cfg.updated(occ__enabled=enabled))
        row.append(evaluate(cross.gt, TrajectorySet.from_results(res)).ids)
    print(f"{a1:5.2f}   {row[0]} / {row[1]}")
