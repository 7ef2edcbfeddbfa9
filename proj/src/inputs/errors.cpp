#include "smellhunter/inputs/parse.hpp"

namespace smellhunter::inputs {

std::string_view to_string(InputErrorKind k) {
    switch (k) {
        case InputErrorKind::malformed: return "malformed";
        case InputErrorKind::missing_header: return "missingHeader";
        case InputErrorKind::missing_entity_id: return "missingEntityId";
        case InputErrorKind::invalid_identifier: return "invalidIdentifier";
        case InputErrorKind::duplicate_column: return "duplicateColumn";
        case InputErrorKind::ragged_row: return "raggedRow";
        case InputErrorKind::empty_entity_id: return "emptyEntityId";
        case InputErrorKind::duplicate_entity: return "duplicateEntity";
        case InputErrorKind::non_numeric: return "nonNumeric";
        case InputErrorKind::non_finite: return "nonFinite";
        case InputErrorKind::duplicate_key: return "duplicateKey";
        case InputErrorKind::unknown_key: return "unknownKey";
        case InputErrorKind::missing_key: return "missingKey";
        case InputErrorKind::empty_value: return "emptyValue";
        case InputErrorKind::wrong_type: return "wrongType";
        case InputErrorKind::out_of_range: return "outOfRange";
        case InputErrorKind::unpaired_coordinate: return "unpairedCoordinate";
    }
    return "malformed";
}

std::string InputError::describe() const {
    std::string out;
    if (row) out += "row " + std::to_string(*row);
    if (field) out += (out.empty() ? "" : ", ") + std::string(row ? "column " : "key ") + "'" + *field + "'";
    if (line && !row) {
        out += (out.empty() ? "" : ", ") + std::string("line ") + std::to_string(*line);
        if (column) out += ":" + std::to_string(*column);
    }
    if (!out.empty()) out += ": ";
    return out + message;
}

}  // namespace smellhunter::inputs
