/*
 * Copyright (C) 2026 The logpath Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "logpath/emu_stack.hpp"

#include "logpath/errors.hpp"

namespace logpath {

namespace {

uint64_t mix64(uint64_t x)
{
    // splitmix64 finalizer
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

} // namespace

EmuStack::EmuStack(ApiSignature callback_method)
{
    push(std::move(callback_method), std::nullopt);
}

void EmuStack::push_hash(const ApiSignature& method)
{
    const uint64_t prev =
        hashes_.empty() ? 0x9e3779b97f4a7c15ull : hashes_.back();
    hashes_.push_back(mix64(prev ^ stable_hash64(method.canonical())));
}

void EmuStack::push(ApiSignature method, std::optional<NodeId> return_to,
                    size_t index_at_push)
{
    push_hash(method);
    frames_.push_back({std::move(method), return_to, index_at_push});
}

void EmuStack::push(Frame frame)
{
    push_hash(frame.method);
    frames_.push_back(std::move(frame));
}

EmuStack::Frame EmuStack::pop()
{
    if (frames_.empty()) {
        throw ContractError("EmuStack: pop on empty stack");
    }
    Frame f = std::move(frames_.back());
    frames_.pop_back();
    hashes_.pop_back();
    return f;
}

} // namespace logpath
