#pragma once

#include <stdexcept>
#include <string>

namespace lcfib {

// Exit-code taxonomy used by the CLI front-end:
//   0 ok, 1 verification failed, 2 bad input, 3 engine limitation.
enum class ExitCode : int {
    ok = 0,
    verify_failed = 1,
    input_error = 2,
    engine_limit = 3,
};

// Malformed or out-of-contract input (files, flags, parameters, polynomials).
struct InputError : std::runtime_error {
    explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

// A mathematically meaningful check failed: lc violated, witness bound broken,
// contact not certified, prediction mismatch, cross-check disagreement.
struct VerifyError : std::runtime_error {
    explicit VerifyError(const std::string& msg) : std::runtime_error(msg) {}
};

// The exact engine cannot continue: non-rational centre over the base point,
// factorization bailout, step cap exceeded, search space exhausted.
struct EngineLimitError : std::runtime_error {
    explicit EngineLimitError(const std::string& msg) : std::runtime_error(msg) {}
};

inline ExitCode exit_code_for(const std::exception& e) {
    if (dynamic_cast<const InputError*>(&e)) return ExitCode::input_error;
    if (dynamic_cast<const EngineLimitError*>(&e)) return ExitCode::engine_limit;
    if (dynamic_cast<const VerifyError*>(&e)) return ExitCode::verify_failed;
    return ExitCode::input_error;
}

} // namespace lcfib
