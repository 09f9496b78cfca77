#pragma once

#include <stdexcept>
#include <string>

namespace artimanip {

enum class TaskId { OpenDoor, OpenDoorPlus, OpenDrawer, OpenDrawerPlus };

/// Task definition: success means opening beyond success_fraction of the
/// joint limit (0.15/0.80 for doors, 0.20/0.80 for drawers).
struct TaskSpec {
  TaskId id = TaskId::OpenDrawerPlus;
  double success_fraction = 0.80;
  int episode_steps = 200;

  bool is_door() const { return id == TaskId::OpenDoor || id == TaskId::OpenDoorPlus; }
};

inline TaskSpec make_task(TaskId id, int episode_steps = 200) {
  double fraction = 0.0;
  switch (id) {
    case TaskId::OpenDoor: fraction = 0.15; break;
    case TaskId::OpenDoorPlus: fraction = 0.80; break;
    case TaskId::OpenDrawer: fraction = 0.20; break;
    case TaskId::OpenDrawerPlus: fraction = 0.80; break;
  }
  return TaskSpec{id, fraction, episode_steps};
}

inline std::string task_name(TaskId id) {
  switch (id) {
    case TaskId::OpenDoor: return "OpenDoor";
    case TaskId::OpenDoorPlus: return "OpenDoorPlus";
    case TaskId::OpenDrawer: return "OpenDrawer";
    case TaskId::OpenDrawerPlus: return "OpenDrawerPlus";
  }
  throw std::logic_error("unknown task");
}

inline TaskId task_from_name(const std::string& name) {
  if (name == "OpenDoor") return TaskId::OpenDoor;
  if (name == "OpenDoorPlus") return TaskId::OpenDoorPlus;
  if (name == "OpenDrawer") return TaskId::OpenDrawer;
  if (name == "OpenDrawerPlus") return TaskId::OpenDrawerPlus;
  throw std::invalid_argument("unknown task name: " + name);
}

}  // namespace artimanip
