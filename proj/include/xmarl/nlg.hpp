#pragma once

// English rendering of query answers from the domain's phrase tables.

#include <string>

#include "xmarl/query.hpp"

namespace xmarl {

// Throws PhraseMapError naming the first agent, action or predicate that has
// no usable phrase.
void check_phrases(const Domain& domain);

std::string render_condition(const Domain& domain, const Query& q, const ConditionAnswer& answer);
std::string render_what(const Domain& domain, const Query& q, const WhatAnswer& answer);

// (UAV.victim_detect & UGV_1.victim_detect) | (...); TRUE / FALSE constants.
std::string render_dnf(const Domain& domain, const ConditionAnswer& answer);

}  // namespace xmarl
