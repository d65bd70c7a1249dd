"""What does the user actually hear (and feel)?

Runs one degraded frame through the full processing chain and prints
every intermediate representation: the 3x4 proximity grid, the shaped
values after adaptation + compression, the twelve audio voices, and the
four tactile belt intensities with their stepper-step commands.
"""

from depthnav import (
    ArtifactModel,
    ProcessingChain,
    inject_artifacts,
    navigation_config,
    normalize_excursion,
    render_views,
)
from depthnav.harness import build_paths

# Use the first generated walking path and its trial-tuned config.
config = navigation_config()
scene = build_paths(0)[0]

frame, guidance, materials = render_views(scene, scene.start, config.sensor)
degraded = inject_artifacts(frame, materials, ArtifactModel(seed=1), config.sensor)

chain = ProcessingChain(config)
out = chain.process(degraded, guidance)

print("proximity grid (rows = image bands, top to bottom; 1.0 = close):")
for row in out.grid.values:
    print("   " + "  ".join(f"{v:.2f}" for v in row))

print("\nshaped for perception (adapter EMA emphasis, then p^(1/k)):")
for row in out.shaped.values:
    print("   " + "  ".join(f"{v:.2f}" for v in row))

print("\naudio code -- one voice per zone, pitch = row, pan = column:")
for v in out.audio.voices:
    bar = "#" * round(v.amplitude * 20)
    print(f"   {v.frequency:6.1f} Hz  pan {v.pan:+.2f}  amp {v.amplitude:.2f} {bar}")

print("\ntactile belt -- four actuators, left to right:")
steps = [normalize_excursion(float(i), config.adapter) for i in out.tactile.intensities]
for i, (intensity, s) in enumerate(zip(out.tactile.intensities, steps)):
    print(f"   actuator {i}: intensity {intensity:.2f} -> {s} steps")
