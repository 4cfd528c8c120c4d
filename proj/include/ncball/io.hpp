#ifndef NCBALL_IO_HPP
#define NCBALL_IO_HPP

#include <cstdint>
#include <string>
#include <string_view>

#include <json.hpp>

#include "ncball/opspace.hpp"
#include "ncball/realization.hpp"
#include "ncball/similarity.hpp"
#include "ncball/specrad.hpp"
#include "ncball/types.hpp"

namespace ncball::io {

using Json = nlohmann::ordered_json;

/// Schema violation; `pointer` is the JSON pointer of the offending value.
class SchemaError : public Error {
 public:
  SchemaError(std::string pointer, const std::string& what)
      : Error(ErrorCode::Schema, "schema error at '" + pointer + "': " + what), pointer_(std::move(pointer)) {}
  const std::string& pointer() const noexcept { return pointer_; }

 private:
  std::string pointer_;
};

// Complex scalars are [re, im]; matrices are row-major nested arrays.
Json to_json(Complex z);
Json to_json(const CMatrix& m);
Json vector_to_json(const CVector& v);
Json to_json(const MatTuple& X);
Json to_json(const DescriptorRealization& R);
Json to_json(const OpSpaceSpec& spec);
Json to_json(const NormEstimate& e);
Json to_json(const SimilarityWitness& w, bool with_trace = false);
Json to_json(const RadiusEstimate& e);
Json to_json(const Decision& d);

// `at` is the JSON pointer of `j` inside the enclosing document.
Complex complex_from_json(const Json& j, const std::string& at = "");
CMatrix matrix_from_json(const Json& j, const std::string& at = "");
CVector vector_from_json(const Json& j, const std::string& at = "");
MatTuple tuple_from_json(const Json& j, const std::string& at = "");
DescriptorRealization realization_from_json(const Json& j, const std::string& at = "");
OpSpaceSpec space_from_json(const Json& j, const std::string& at = "");

/// Parses a file; malformed JSON becomes a SchemaError at the root.
Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

MatTuple load_tuple(const std::string& path);
DescriptorRealization load_realization(const std::string& path);
/// Loads a tuple or realization of scalars/matrices used as an evaluation point.
MatTuple load_point(const std::string& path);

void save_tuple(const MatTuple& X, const std::string& path);
void save_realization(const DescriptorRealization& R, const std::string& path);

/// Pretty JSON with round-trip precision and a trailing newline.
std::string dump(const Json& j);
void save_report(const Json& report, const std::string& path);

/// 64-bit FNV-1a of the bytes, as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view bytes);

}  // namespace ncball::io

#endif  // NCBALL_IO_HPP
