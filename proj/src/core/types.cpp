#include "hjhomog/types.hpp"

namespace hjh {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument: return "invalid-argument";
        case ErrorCode::Config: return "configuration";
        case ErrorCode::Domain: return "domain";
        case ErrorCode::Numeric: return "numeric";
        case ErrorCode::Unsupported: return "unsupported";
    }
    return "unknown";
}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

bool all_finite(const Vec& v, int dim) {
    for (int i = 0; i < dim; ++i)
        if (!std::isfinite(v[i])) return false;
    return true;
}

}  // namespace hjh
