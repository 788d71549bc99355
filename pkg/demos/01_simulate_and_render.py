"""Drive the simulator by hand: pick an object up, carry it, drop it.

Shows the fixed-tick world model, the gripper's PWM thresholds, and what the
virtual cameras see, all without any learning machinery.
"""

import numpy as np

from imlw.obs import DEFAULT_CAMERAS, build_observation
from imlw.sim.tasks import get_task
from imlw.sim.types import DT, ArmCommand
from imlw.sim.world import step, success, world_init


def drive_to(world, x, y, pwm):
    """Naive proportional controller: one tick toward the target."""
    return step(world, ArmCommand(vx=(x - world.arm.x) / DT,
                                  vy=(y - world.arm.y) / DT,
                                  pwm_target=pwm).clamped())


def main():
    task = get_task("pick_place")
    case = task.cases[0]
    world = world_init(task, case, seed=0)
    obj = world.objects[0]
    rec = world.receptacles[0]
    print(f"task {task.name}, case {case.case_id}")
    print(f"arm starts at ({world.arm.x:.2f}, {world.arm.y:.2f}); "
          f"object at ({obj.x:.3f}, {obj.y:.3f}); receptacle at ({rec.x:.2f}, {rec.y:.2f})")

    # approach with the gripper open, then close (PWM ramps at a slew limit,
    # the object attaches when PWM crosses 0.6 on the way up)
    for _ in range(200):
        world = drive_to(world, obj.x, obj.y, 0.0)
        if abs(world.arm.x - obj.x) < 1e-9 and abs(world.arm.y - obj.y) < 1e-9:
            break
    while world.gripper.attached_object is None:
        world = step(world, ArmCommand(pwm_target=1.0))
    print(f"t={world.time:.2f}s: grasped (pwm={world.gripper.pwm:.2f})")

    # carry to the receptacle, release (detach when PWM falls below 0.4)
    for _ in range(200):
        world = drive_to(world, rec.x, rec.y, 1.0)
        if abs(world.arm.x - rec.x) < 1e-9 and abs(world.arm.y - rec.y) < 1e-9:
            break
    while world.gripper.attached_object is not None:
        world = step(world, ArmCommand(pwm_target=0.0))
    print(f"t={world.time:.2f}s: released into receptacle, "
          f"stack={list(world.receptacles[0].stack)}")
    print(f"success: {success(task, world)}")

    obs = build_observation(world, DEFAULT_CAMERAS)
    print(f"\nobservation: proprio={np.round(obs.proprio, 3)}, "
          f"global {obs.global_view.shape}, wrist {obs.wrist_view.shape}, "
          f"features {obs.feature_vec.shape}")
    lit = (obs.global_view.sum(axis=2) > 0).mean()
    print(f"global view has {lit:.0%} non-background pixels")


if __name__ == "__main__":
    main()
