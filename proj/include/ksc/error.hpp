#ifndef KSC_ERROR_HPP
#define KSC_ERROR_HPP

#include <stdexcept>
#include <string>

namespace ksc {

enum class errc {
    malformed_scenario,
    clique_size_mismatch,
    cap_exceeded,
    duplicate_ray,
    dimension_mismatch,
    non_closing,
    no_dimension_function,
    no_solution_up_to,
    too_large,
    invalid_overlap,
    invalid_colouring,
    bad_input,
};

inline const char* errc_name(errc c) {
    switch (c) {
    case errc::malformed_scenario: return "MalformedScenario";
    case errc::clique_size_mismatch: return "CliqueSizeMismatch";
    case errc::cap_exceeded: return "CapExceeded";
    case errc::duplicate_ray: return "DuplicateRay";
    case errc::dimension_mismatch: return "DimensionMismatch";
    case errc::non_closing: return "NonClosing";
    case errc::no_dimension_function: return "NoDimensionFunction";
    case errc::no_solution_up_to: return "NoSolutionUpTo";
    case errc::too_large: return "TooLarge";
    case errc::invalid_overlap: return "InvalidOverlap";
    case errc::invalid_colouring: return "InvalidColouring";
    case errc::bad_input: return "BadInput";
    }
    return "Error";
}

class error : public std::runtime_error {
public:
    error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

} // namespace ksc

#endif
