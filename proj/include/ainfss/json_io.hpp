#pragma once

#include "ainfss/pages.hpp"

namespace ainfss {

/* One interchange document for all three kinds; "order" is the ħ-order of a
 * deformation component or the filtration shift of a filtered one (0 for
 * plain algebras). */
struct AlgebraDocument {
    enum class Kind { algebra, deformation, filtered };

    Kind kind = Kind::algebra;
    FormalBigradedDeformation value;

    const AInfinityAlgebra& algebra() const;        // kind must be algebra
    FilteredAInfinity filtered() const;             // kind must be filtered
    const FormalBigradedDeformation& deformation() const { return value; }

    static const char* kind_name(Kind k);
};

/* Parses the canonical JSON form; rejects unknown fields, undeclared names
 * and non-canonical coefficients.  serialize(parse(text)) == canonical text. */
AlgebraDocument parse_document(const std::string& text);
std::string serialize_document(const AlgebraDocument& doc);

AlgebraDocument document_from(const AInfinityAlgebra& a);
AlgebraDocument document_from(const FormalBigradedDeformation& d);
AlgebraDocument document_from(const FilteredAInfinity& f);

/* Page reports: the serialized form of a PageSet, consumed by `compare`. */
std::string serialize_pages(const PageSet& ps);
PageSet parse_pages(const std::string& text);

}  // namespace ainfss
