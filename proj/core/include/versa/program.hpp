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

/**
 * @file program.hpp
 * @brief Abstract core operations and the coroutine type programs are written in.
 *
 * A program is a C++20 coroutine. Each `co_await` of an operation hands the
 * operation to the simulation engine and suspends the core until the engine
 * signals completion; loads and pops resume with the delivered word.
 *
 * ```cpp
 * Program copy_word(Addr from, Addr to) {
 *   Word v = co_await op::Load{from};
 *   co_await op::Compute{1, 0};
 *   co_await op::Store{to, v};
 * }
 * ```
 *
 * Programs may `co_await` other `Task<T>` coroutines; operations issued by a
 * nested task travel to the engine through the same slot as the root's.
 */

#pragma once

#include <coroutine>
#include <cstdint>
#include <exception>
#include <memory>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "versa/modes.hpp"
#include "versa/topology.hpp"

namespace versa {

enum class AtomicKind : std::uint8_t { FetchAdd, Read, Write };
enum class BarrierScope : std::uint8_t { Tile, Centralized, Tree };

std::string_view barrier_scope_name(BarrierScope s);

namespace op {

struct Compute {
  std::uint32_t cycles = 1;
  std::uint64_t flops = 0;
};
struct Load {
  Addr addr = 0;
};
struct Store {
  Addr addr = 0;
  Word value = 0;
};
/// Block transfer from next-level memory into ROCM scratchpad space.
struct CopyIn {
  Addr global = 0;
  Addr local = 0;
  std::uint32_t words = 0;
};
/// Block transfer from ROCM scratchpad space to next-level memory.
struct CopyOut {
  Addr local = 0;
  Addr global = 0;
  std::uint32_t words = 0;
};
struct R2rWrite {
  Direction dir = Direction::E;
  Word value = 0;
};
struct R2rRead {
  Direction dir = Direction::W;
};
/// Reads the incoming link `from` and writes the word to the outgoing link
/// `to` in a single issue slot; resumes with the forwarded word.
struct R2rMove {
  Direction from = Direction::W;
  Direction to = Direction::E;
};
struct R2rEnable {
  bool on = true;
};
struct Barrier {
  BarrierScope scope = BarrierScope::Tree;
};
struct FifoPush {
  int chan = 0;
  Word value = 0;
};
struct FifoPop {
  int chan = 0;
};
/// Scratchpad read-modify-write. Address must fall in the T-SPM or G-SPM region.
struct Atomic {
  AtomicKind kind = AtomicKind::FetchAdd;
  Addr addr = 0;
  Word operand = 0;
};
/// Manager only. Await a named object: GCC 11 destroys non-trivial
/// temporaries in a co_await operand twice.
struct SetMode {
  TileMode mode;
};
/// Manager only: write back (if dirty) the line holding `addr` in `slice`.
struct FlushLine {
  int slice = 0;
  Addr addr = 0;
};
struct Halt {};

}  // namespace op

using CoreOp = std::variant<op::Compute, op::Load, op::Store, op::CopyIn, op::CopyOut,
                            op::R2rWrite, op::R2rRead, op::R2rMove, op::R2rEnable,
                            op::Barrier, op::FifoPush, op::FifoPop, op::Atomic,
                            op::SetMode, op::FlushLine, op::Halt>;

std::string op_name(const CoreOp& o);

template <class T, class V>
struct is_variant_member;
template <class T, class... Ts>
struct is_variant_member<T, std::variant<Ts...>> : std::bool_constant<(std::is_same_v<T, Ts> || ...)> {};

template <class T>
concept CoreOpType = is_variant_member<std::remove_cvref_t<T>, CoreOp>::value;

/// Hand-off point between a running program and the engine.
struct OpSlot {
  std::optional<CoreOp> op;
  Word result = 0;
  std::coroutine_handle<> resume_point;
};

template <class T = void>
class Task;

namespace detail {

struct PromiseBase;

struct OpAwaiter {
  OpSlot* slot;
  CoreOp op;

  bool await_ready() const noexcept { return false; }
  void await_suspend(std::coroutine_handle<> h) {
    slot->op = std::move(op);
    slot->resume_point = h;
  }
  Word await_resume() const noexcept { return slot->result; }
};

struct FinalAwaiter {
  bool await_ready() const noexcept { return false; }
  template <class P>
  std::coroutine_handle<> await_suspend(std::coroutine_handle<P> h) noexcept {
    auto cont = h.promise().continuation;
    return cont ? cont : std::noop_coroutine();
  }
  void await_resume() const noexcept {}
};

template <class U>
struct TaskAwaiter;

struct PromiseBase {
  OpSlot* slot = nullptr;
  std::coroutine_handle<> continuation;
  std::exception_ptr error;

  std::suspend_always initial_suspend() noexcept { return {}; }
  FinalAwaiter final_suspend() noexcept { return {}; }
  void unhandled_exception() noexcept { error = std::current_exception(); }

  template <CoreOpType Op>
  OpAwaiter await_transform(Op&& o) {
    return OpAwaiter{slot, CoreOp{std::forward<Op>(o)}};
  }
  OpAwaiter await_transform(CoreOp o) { return OpAwaiter{slot, std::move(o)}; }

  template <class U>
  TaskAwaiter<U> await_transform(Task<U>&& t);
};

template <class T>
struct Promise : PromiseBase {
  std::optional<T> value;
  Task<T> get_return_object();
  template <class V>
  void return_value(V&& v) {
    value.emplace(std::forward<V>(v));
  }
};

template <>
struct Promise<void> : PromiseBase {
  Task<void> get_return_object();
  void return_void() noexcept {}
};

}  // namespace detail

/// Lazily started coroutine. Owns its frame.
template <class T>
class Task {
 public:
  using promise_type = detail::Promise<T>;
  using handle_type = std::coroutine_handle<promise_type>;

  Task() = default;
  explicit Task(handle_type h) : h_(h) {}
  Task(Task&& o) noexcept : h_(std::exchange(o.h_, {})) {}
  Task& operator=(Task&& o) noexcept {
    if (this != &o) {
      reset();
      h_ = std::exchange(o.h_, {});
    }
    return *this;
  }
  Task(const Task&) = delete;
  Task& operator=(const Task&) = delete;
  ~Task() { reset(); }

  handle_type handle() const { return h_; }
  bool valid() const { return static_cast<bool>(h_); }

 private:
  void reset() {
    if (h_) h_.destroy();
    h_ = {};
  }
  handle_type h_;
};

namespace detail {

template <class T>
Task<T> Promise<T>::get_return_object() {
  return Task<T>{std::coroutine_handle<Promise<T>>::from_promise(*this)};
}

inline Task<void> Promise<void>::get_return_object() {
  return Task<void>{std::coroutine_handle<Promise<void>>::from_promise(*this)};
}

template <class U>
struct TaskAwaiter {
  Task<U> task;
  OpSlot* slot;

  bool await_ready() const noexcept { return !task.valid(); }
  std::coroutine_handle<> await_suspend(std::coroutine_handle<> parent) {
    auto& p = task.handle().promise();
    p.slot = slot;
    p.continuation = parent;
    return task.handle();
  }
  U await_resume() {
    auto& p = task.handle().promise();
    if (p.error) std::rethrow_exception(p.error);
    if constexpr (!std::is_void_v<U>) return std::move(*p.value);
  }
};

template <class U>
TaskAwaiter<U> PromiseBase::await_transform(Task<U>&& t) {
  return TaskAwaiter<U>{std::move(t), slot};
}

}  // namespace detail

/// A root program installed on one core.
class Program {
 public:
  Program() = default;
  Program(Task<void> root);  // NOLINT(google-explicit-constructor)

  Program(Program&&) noexcept = default;
  Program& operator=(Program&&) noexcept = default;

  /// Program that issues the given operations in order.
  static Program from_ops(std::vector<CoreOp> ops);

  /// Resumes the program with the result of its previous operation and
  /// returns the next operation, or nullopt once the program has finished.
  /// Exceptions thrown inside the program propagate from here.
  std::optional<CoreOp> next(Word result);

  bool finished() const { return finished_; }

 private:
  Task<void> root_;
  std::unique_ptr<OpSlot> slot_;
  bool started_ = false;
  bool finished_ = true;
};

}  // namespace versa
