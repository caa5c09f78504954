/*
 * Copyright 2026 The Versa Simulator Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "versa/program.hpp"

namespace versa {

std::string_view barrier_scope_name(BarrierScope s) {
  switch (s) {
    case BarrierScope::Tile: return "tile";
    case BarrierScope::Centralized: return "centralized";
    case BarrierScope::Tree: return "tree";
  }
  return "?";
}

namespace {

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

Task<void> run_ops(std::vector<CoreOp> ops) {
  for (auto& o : ops) co_await std::move(o);
}

}  // namespace

std::string op_name(const CoreOp& o) {
  return std::visit(
      Overloaded{
          [](const op::Compute&) { return "compute"; },
          [](const op::Load&) { return "load"; },
          [](const op::Store&) { return "store"; },
          [](const op::CopyIn&) { return "copy_in"; },
          [](const op::CopyOut&) { return "copy_out"; },
          [](const op::R2rWrite&) { return "r2r_write"; },
          [](const op::R2rRead&) { return "r2r_read"; },
          [](const op::R2rMove&) { return "r2r_move"; },
          [](const op::R2rEnable&) { return "r2r_enable"; },
          [](const op::Barrier&) { return "barrier"; },
          [](const op::FifoPush&) { return "fifo_push"; },
          [](const op::FifoPop&) { return "fifo_pop"; },
          [](const op::Atomic&) { return "atomic"; },
          [](const op::SetMode&) { return "set_mode"; },
          [](const op::FlushLine&) { return "flush_line"; },
          [](const op::Halt&) { return "halt"; },
      },
      o);
}

Program::Program(Task<void> root)
    : root_(std::move(root)), slot_(std::make_unique<OpSlot>()), finished_(!root_.valid()) {
  if (root_.valid()) root_.handle().promise().slot = slot_.get();
}

Program Program::from_ops(std::vector<CoreOp> ops) { return Program(run_ops(std::move(ops))); }

std::optional<CoreOp> Program::next(Word result) {
  if (finished_) return std::nullopt;
  slot_->op.reset();
  if (!started_) {
    started_ = true;
    root_.handle().resume();
  } else {
    slot_->result = result;
    slot_->resume_point.resume();
  }
  if (root_.handle().done()) {
    finished_ = true;
    if (auto err = root_.handle().promise().error) std::rethrow_exception(err);
    return std::nullopt;
  }
  return std::move(slot_->op);
}

}  // namespace versa
