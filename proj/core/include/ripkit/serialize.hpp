#pragma once

#include <string>
#include <vector>

#include "ripkit/audit.hpp"
#include "ripkit/expander.hpp"
#include "ripkit/incoherence.hpp"
#include "ripkit/phase.hpp"
#include "ripkit/recover.hpp"
#include "ripkit/ripcheck.hpp"
#include "ripkit/tails.hpp"

namespace ripkit {

// JSON report emitters for the CLI; every artifact embeds the schema
// version and a kind tag.
std::string report_json(const IncoherenceReport& rep);
std::string report_json(const LowerTailReport& rep);
std::string report_json(const ExpansionReport& rep);
std::string report_json(const RipEstimate& est);
std::string report_json(const RipSampledReport& rep);
std::string report_json(const MomentRow& row);
std::string report_json(const TailReport& rep);
std::string report_json(const NegativeAssociationReport& rep);
std::string report_json(const LatalaResult& res);
std::string report_json(const ColumnNormAudit& audit);
std::string report_json(const RowOrderStatsAudit& audit);
std::string report_json(const FrobeniusAudit& audit);
std::string report_json(const DimensionBound& bound);
std::string report_json(const SparsityAudit& audit);
std::string report_json(const PropertyReport& rep);
std::string report_json(const IntegralSumCheck& chk);
std::string report_json(const RecoveryResult& res);
std::string report_json(const std::vector<ClaimRecord>& ledger);
std::string report_json(const GuaranteeCheck& chk);
std::string report_json(const ConverseReport& rep);
std::string report_json(const LinearFit& fit);

std::string vector_to_json(const std::vector<double>& v);
std::vector<double> vector_from_json_file(const std::string& path);

}  // namespace ripkit
