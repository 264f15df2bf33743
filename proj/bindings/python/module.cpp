// _forensica: thin pybind11 layer. JSON crosses the boundary as text; the
// Python package turns it into dicts.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <optional>

#include "forensica/calibrate.hpp"
#include "forensica/error.hpp"
#include "forensica/evidence.hpp"
#include "forensica/session.hpp"
#include "forensica/wire.hpp"

namespace py = pybind11;
using namespace forensica;
using nlohmann::json;

namespace {

GenConfig config_or_default(const std::optional<std::string>& config_json) {
  return config_json ? config_from_json_text(*config_json) : GenConfig{};
}

GameKind game_from(const std::string& name) {
  auto g = game_kind_from_name(name);
  if (!g) throw Error(ErrorKind::InvalidConfig, "unknown game '" + name + "' (village or station)");
  return *g;
}

WorldSeed seed_from(const py::object& seed) {
  if (py::isinstance<py::str>(seed)) return parse_seed(seed.cast<std::string>());
  const py::int_ v = seed.cast<py::int_>();
  if (v < py::int_(0)) throw Error(ErrorKind::InvalidConfig, "seed must be non-negative");
  return WorldSeed{v.cast<std::uint64_t>()};
}

class PySession {
 public:
  PySession(const std::string& world_text, const std::optional<std::string>& config_json)
      : session_(std::make_unique<GameSession>(parse_world(world_text), config_or_default(config_json).session)) {}

  std::string command(const std::string& command_json) {
    return apply_command(*session_, json::parse(command_json)).dump();
  }
  std::string view() const { return session_->full_view().dump(); }
  std::string phase() const { return std::string(session_phase_name(session_->phase())); }
  std::string game() const { return std::string(game_kind_name(session_->game())); }
  std::pair<int, int> player() const { return {session_->player().x, session_->player().y}; }
  int turns() const { return session_->turns(); }
  std::string export_world() const { return serialize_world(strip_ground_truth(session_->bundle())); }

 private:
  std::unique_ptr<GameSession> session_;
};

}  // namespace

PYBIND11_MODULE(_forensica, m) {
  m.doc() = "Seeded village and station worlds, and sessions to investigate them";

  static py::exception<Error> error(m, "ForensicaError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const CorruptWorldError& e) {
      PyErr_SetObject(error.ptr(), py::make_tuple(std::string(error_kind_name(e.kind())), e.what(), e.path()).ptr());
    } catch (const Error& e) {
      PyErr_SetObject(error.ptr(), py::make_tuple(std::string(error_kind_name(e.kind())), e.what()).ptr());
    } catch (const json::exception& e) {
      PyErr_SetObject(error.ptr(), py::make_tuple(std::string("parse"), e.what()).ptr());
    }
  });

  m.attr("FORMAT_VERSION") = kFormatVersion;
  m.attr("WORLD_FILE_EXTENSION") = std::string(kWorldFileExtension);

  m.def("default_config", [] { return config_to_json_text(GenConfig{}); });
  m.def("normalize_config", [](const std::string& text) { return config_to_json_text(config_from_json_text(text)); },
        py::arg("config_json"));
  m.def("config_digest", [](const std::optional<std::string>& c) { return config_digest(config_or_default(c)); },
        py::arg("config_json") = py::none());

  m.def(
      "generate",
      [](const std::string& game, const py::object& seed, const std::optional<std::string>& config) {
        const WorldSeed s = seed_from(seed);
        const GenConfig c = config_or_default(config);
        py::gil_scoped_release unlocked;
        return serialize_world(generate_world(game_from(game), s, c));
      },
      py::arg("game"), py::arg("seed"), py::arg("config_json") = py::none(),
      "Generate a world and return its canonical JSON text.");

  m.def(
      "roundtrip", [](const std::string& text) { return serialize_world(parse_world(text)); }, py::arg("world_json"),
      "Parse and validate a world file, then serialize it again.");
  m.def(
      "strip", [](const std::string& text) { return serialize_world(strip_ground_truth(parse_world(text))); },
      py::arg("world_json"), "Drop the sealed ground-truth section.");

  m.def(
      "calibrate",
      [](const std::string& game, int runs, const py::object& seed_base, const std::optional<std::string>& config) {
        if (runs < 1) throw Error(ErrorKind::InvalidConfig, "runs must be >= 1");
        const GameKind g = game_from(game);
        const std::uint64_t base = seed_from(seed_base).value;
        const GenConfig c = config_or_default(config);
        py::gil_scoped_release unlocked;
        return outcome_counts(g, c, base, runs);
      },
      py::arg("game"), py::arg("runs") = 500, py::arg("seed_base") = 0, py::arg("config_json") = py::none());

  m.def("timestamp", &timestamp_for, py::arg("start_minute"), py::arg("turn"));

  py::class_<PySession>(m, "Session")
      .def(py::init<const std::string&, const std::optional<std::string>&>(), py::arg("world_json"),
           py::arg("config_json") = py::none())
      .def("command", &PySession::command, py::arg("command_json"))
      .def("view", &PySession::view)
      .def("export_world", &PySession::export_world)
      .def_property_readonly("phase", &PySession::phase)
      .def_property_readonly("game", &PySession::game)
      .def_property_readonly("player", &PySession::player)
      .def_property_readonly("turns", &PySession::turns);
}
