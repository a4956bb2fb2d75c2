#pragma once

#include "term.hpp"
#include "syntax.hpp"
#include "substitution.hpp"
#include "theory.hpp"
#include "subterms.hpp"
#include "rewrite.hpp"
#include "abstraction.hpp"
#include "elementary.hpp"
#include "derivation.hpp"
#include "engine.hpp"
#include "nd_oracle.hpp"
#include "check.hpp"
#include "translate.hpp"
#include "proof_json.hpp"
#include "constraints.hpp"
#include "problem_file.hpp"
