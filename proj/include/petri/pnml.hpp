#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "petri/core.hpp"

namespace petri {

enum class PnmlErrorCode {
    Unreadable,
    MalformedDocument,
    UnsupportedFeature,
    DuplicateId,
    DanglingArc,
};

std::string_view to_string(PnmlErrorCode code);

class PnmlError : public std::runtime_error {
public:
    /// `location` names the offending element or line, e.g. "line 12" or "arc 'a3'".
    PnmlError(PnmlErrorCode code, const std::string& location, const std::string& detail);
    PnmlErrorCode code() const noexcept { return code_; }
    const std::string& location() const noexcept { return location_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    PnmlErrorCode code_;
    std::string location_;
    std::string detail_;
};

inline constexpr std::string_view kPnmlNamespace = "http://www.pnml.org/version-2009/grammar/pnml";
inline constexpr std::string_view kPtNetType = "http://www.pnml.org/version-2009/grammar/ptnet";

struct PnmlDocument {
    std::string net_id = "net";
    std::string net_type_uri = std::string(kPtNetType);
    std::optional<std::string> net_name;
    std::string page_id = "page0";
    PetriNet net;
    std::vector<std::string> arc_ids;  // parallel to net.arcs(); generated when absent

    // Elements the parser does not interpret (graphics, toolspecific, ...),
    // serialized as XML fragments and written back unchanged.
    std::vector<std::string> net_extras;
    std::vector<std::string> page_extras;
    std::map<std::string, std::vector<std::string>> node_extras;  // by place/transition/arc id
};

PnmlDocument parse_pnml_document(std::string_view text);
PetriNet parse_pnml(std::string_view text);
PnmlDocument read_pnml_file(const std::string& path);

/// Deterministic output: fixed attribute order, two-space indent, LF endings.
std::string write_pnml(const PnmlDocument& doc);
std::string write_pnml(const PetriNet& net, const std::string& net_id = "net");

/// Same ids, labels, arcs (as id pairs, in order) and initial marking.
bool isomorphic(const PetriNet& a, const PetriNet& b);

}  // namespace petri
