"""Deterministic fixed-tick 2D world: kinematics, grasping, tasks, cameras."""

from .render import PALETTE, render
from .tasks import (
    TASK_SCHEMA_VERSION,
    builtin_tasks,
    get_task,
    load_task_library,
    save_task_library,
    task_from_dict,
    task_to_dict,
)
from .types import (
    DT,
    GRASP_RADIUS,
    HOME_POSE,
    PWM_CLOSE,
    PWM_OPEN,
    V_MAX,
    VYAW_MAX,
    ArmCommand,
    CameraConfig,
    CaseSetup,
    GripperState,
    Pose2,
    Receptacle,
    SceneObject,
    TaskSpec,
    WorldState,
    wrap_yaw,
)
from .world import step, success, world_init

__all__ = [
    "DT", "GRASP_RADIUS", "HOME_POSE", "PWM_CLOSE", "PWM_OPEN", "V_MAX", "VYAW_MAX",
    "ArmCommand", "CameraConfig", "CaseSetup", "GripperState", "Pose2", "Receptacle",
    "SceneObject", "TaskSpec", "WorldState", "wrap_yaw",
    "PALETTE", "render",
    "TASK_SCHEMA_VERSION", "builtin_tasks", "get_task", "load_task_library",
    "save_task_library", "task_from_dict", "task_to_dict",
    "step", "success", "world_init",
]
