#pragma once

#include "rdafem/estimator.hpp"
#include "rdafem/stepper.hpp"

#include <string>
#include <vector>

namespace rdafem {

class OutputError : public std::runtime_error {
public:
    explicit OutputError(const std::string& what) : std::runtime_error(what) {}
};

/// Writes text to `path` atomically (temp file in the same directory, then
/// rename).
void atomic_write(const std::string& path, const std::string& text);

/// Header line of the per-step diagnostics CSV.
std::string diagnostics_csv_header();
/// One CSV row; formatting is locale-free and reproducible byte for byte.
std::string diagnostics_csv_row(const StepRecord& rec);

/// Legacy-VTK ASCII unstructured grid snapshot: reference coordinates as
/// points, mapped physical coordinates as a point-data vector field,
/// per-species point data u1..um, combined per-element indicator as cell
/// data.
std::string snapshot_text(const SystemState& state, const ReferenceMesh& mesh,
                          const DomainMap& map, const IndicatorField& field);

void write_snapshot(const SystemState& state, const ReferenceMesh& mesh, const DomainMap& map,
                    const IndicatorField& field, const std::string& path);

}  // namespace rdafem
