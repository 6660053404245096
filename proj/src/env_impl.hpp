#pragma once

#include <cstdint>

#include "grid.hpp"
#include "xmarl/envs.hpp"

namespace xmarl::detail {

void run_sr(int n_agents, const SimulationConfig& config, const SampleSink& sink);
void run_lbf(int n_agents, const SimulationConfig& config, const SampleSink& sink);
void run_rware(int n_agents, const SimulationConfig& config, const SampleSink& sink);

// Drives one episode: observe, decide, apply, emit, until done or max_steps.
template <typename Episode>
void drive_episode(Episode& episode, Rng& rng, int max_steps, std::uint64_t episode_id, const SampleSink& sink) {
    ConcreteJointState state = episode.observe();
    for (int t = 0; t < max_steps && !episode.done(); ++t) {
        JointAction action = episode.decide(rng);
        episode.apply(action);
        ConcreteJointState next = episode.observe();
        sink(TraceSample{episode_id, static_cast<std::uint64_t>(t), state, action, next});
        state = std::move(next);
    }
}

inline std::uint16_t act(std::size_t index) { return static_cast<std::uint16_t>(index); }

}  // namespace xmarl::detail
