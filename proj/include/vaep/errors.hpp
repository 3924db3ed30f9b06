#pragma once

#include <stdexcept>
#include <string>

namespace vaep {

// Coarse error class; the CLI maps these onto exit codes 2, 3 and 4.
enum class ErrorKind { input, contract, internal };

// Every failure raised by the library carries the module that raised it and a
// stable code name ("SchemaMismatch", "MalformedLine", ...).
class Error : public std::runtime_error {
 public:
  Error(std::string module, std::string code, const std::string& detail, ErrorKind kind);

  const std::string& module() const noexcept { return module_; }
  const std::string& code() const noexcept { return code_; }
  ErrorKind kind() const noexcept { return kind_; }

 private:
  std::string module_;
  std::string code_;
  ErrorKind kind_;
};

int exit_code_for(ErrorKind kind) noexcept;

namespace errors {

// spadl
Error duplicate_ordinal(long long action_id);
Error unknown_team(const std::string& team_id);
Error unsortable_timestamps(const std::string& detail);
Error mixed_games(const std::string& a, const std::string& b);
Error score_mismatch(const std::string& detail);

// ingest
Error unmapped_type(const std::string& type_name);
Error malformed_line(std::size_t line_no, const std::string& detail);
Error bad_mapping(const std::string& detail);

// dataset / model
Error schema_mismatch(const std::string& detail);
Error empty_input(const std::string& module, const std::string& detail);
Error degenerate_input(const std::string& detail);
Error length_mismatch(const std::string& module, std::size_t a, std::size_t b);
Error version_mismatch(unsigned found, unsigned supported);
Error corrupt_file(const std::string& detail);

// valuation / ratings
Error missing_state(const std::string& detail);
Error zero_minutes(const std::string& player_id);

// io
Error missing_file(const std::string& path);
Error io_failure(const std::string& path, const std::string& detail);
Error malformed_file(const std::string& module, const std::string& path, const std::string& detail);
Error invalid_argument(const std::string& module, const std::string& detail);

}  // namespace errors
}  // namespace vaep
