#pragma once

#include <memory>

#include "particleforge/ips.hpp"

namespace particleforge {

/// Two-state voter model: v flips to the opposite opinion at rate
/// (#neighbors already holding it)^k; c_v = deg(v)^k. Self-updating.
std::unique_ptr<JumpKernel> make_voter(int k);

/// Sandpile on integer grain counts: a site holding more grains than its
/// degree topples at rate deg(v)^k, sending one grain to each neighbor.
std::unique_ptr<JumpKernel> make_discrete_sandpile(int k);

/// Sandpile on non-negative mass: a site with mass above the threshold
/// sheds lambda, split equally among its neighbors, at rate deg(v)^k.
std::unique_ptr<JumpKernel> make_divisible_sandpile(int k, double lambda);

/// Contact process: recovery at rate 1, infection at rate
/// lambda * (#infected neighbors)^k; c_v = max(1, lambda * deg(v)^k).
/// Self-updating.
std::unique_ptr<JumpKernel> make_contact(double lambda, int k);

/// Interacting urns of white/black balls; ticks at rate deg(v)^k draw a
/// ball from v's urn and replenish every neighbor: a white draw adds
/// (alpha white, m-alpha black), a black draw (m-beta white, beta black).
/// An empty urn never ticks.
std::unique_ptr<JumpKernel> make_urn(int alpha_white, int beta_black, int m, int k);

/// Minimal birth-death instance: immigration at rate b0; one death at rate
/// d0 + lambda * (#occupied neighbors) while the site is occupied.
std::unique_ptr<JumpKernel> make_birth_death(double b0, double d0, double lambda);

}  // namespace particleforge
