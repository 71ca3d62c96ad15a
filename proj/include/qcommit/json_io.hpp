/** @file
 * JSON wire formats: operators as {rows, cols, re, im}, circuits as
 * {wires, ancillas, gates, discards, split}, instances with kind and mu
 * metadata.  Serialization is deterministic (sorted keys, shortest
 * round-trip doubles) so identical runs produce identical bytes.
 */

#ifndef QCOMMIT_JSON_IO_HPP
#define QCOMMIT_JSON_IO_HPP

#include <json.hpp>

#include "qcommit/channels.hpp"
#include "qcommit/linalg.hpp"

namespace qcommit {

nlohmann::json to_json(const Mat& m);
Mat mat_from_json(const nlohmann::json& j);

nlohmann::json to_json(const PureState& s);
PureState pure_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Circuit& c);
Circuit circuit_from_json(const nlohmann::json& j);

nlohmann::json to_json(const QSDInstance& inst);
QSDInstance qsd_from_json(const nlohmann::json& j);

}  // namespace qcommit

#endif
