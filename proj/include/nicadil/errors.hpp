#pragma once

#include <stdexcept>
#include <string>

namespace nicadil {

// Error taxonomy shared by all modules. The CLI maps every Error subclass to
// exit code 3 and records code() in the report.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

struct ShapeMismatch : Error {
    explicit ShapeMismatch(const std::string& what) : Error("ShapeMismatch", what) {}
};

struct IndeterminateSign : Error {
    explicit IndeterminateSign(const std::string& what) : Error("IndeterminateSign", what) {}
};

struct GridOverflow : Error {
    explicit GridOverflow(const std::string& what) : Error("GridOverflow", what) {}
};

struct NormExceeded : Error {
    explicit NormExceeded(const std::string& what) : Error("NormExceeded", what) {}
};

struct NotInMonoid : Error {
    explicit NotInMonoid(const std::string& what) : Error("NotInMonoid", what) {}
};

struct NonCommutingEntries : Error {
    explicit NonCommutingEntries(const std::string& what) : Error("NonCommutingEntries", what) {}
};

struct NotHermitian : Error {
    explicit NotHermitian(const std::string& what) : Error("NotHermitian", what) {}
};

struct GramNotPSD : Error {
    explicit GramNotPSD(const std::string& what) : Error("GramNotPSD", what) {}
};

struct SamplerExhausted : Error {
    explicit SamplerExhausted(const std::string& what) : Error("SamplerExhausted", what) {}
};

struct SchemaError : Error {
    explicit SchemaError(const std::string& what) : Error("SchemaError", what) {}
};

} // namespace nicadil
