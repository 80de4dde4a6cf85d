#include "vibench/harness/adapter.hpp"

#include <spawn.h>
#include <sys/wait.h>

#include <atomic>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <unistd.h>

#include "json.hpp"
#include "vibench/core/error.hpp"
#include "vibench/core/image_io.hpp"
#include "vibench/features/fingerprint.hpp"

extern char** environ;

namespace vibench::harness {
namespace {

void check_prediction(const VideoClip& pred, const VideoClip& input, const std::string& method) {
  if (pred.length() != input.length() || pred.width() != input.width() || pred.height() != input.height()) {
    throw Error("method '" + method + "' returned " + std::to_string(pred.length()) + " frames of " +
                std::to_string(pred.width()) + "x" + std::to_string(pred.height()) + ", expected " +
                std::to_string(input.length()) + " of " + std::to_string(input.width()) + "x" +
                std::to_string(input.height()));
  }
  pred.check_uniform();
}

std::string substitute(std::string arg, const std::string& token, const std::string& value) {
  for (std::size_t pos = arg.find(token); pos != std::string::npos; pos = arg.find(token, pos + value.size())) {
    arg.replace(pos, token.size(), value);
  }
  return arg;
}

int spawn_and_wait(const std::vector<std::string>& argv) {
  std::vector<char*> args;
  for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
  args.push_back(nullptr);
  pid_t pid = 0;
  const int rc = posix_spawnp(&pid, args[0], nullptr, nullptr, args.data(), environ);
  if (rc != 0) throw Error("cannot start '" + argv[0] + "': " + std::strerror(rc));
  int status = 0;
  while (waitpid(pid, &status, 0) < 0) {
    if (errno != EINTR) throw Error("waitpid failed: " + std::string(std::strerror(errno)));
  }
  if (WIFEXITED(status)) return WEXITSTATUS(status);
  return 128 + (WIFSIGNALED(status) ? WTERMSIG(status) : 0);
}

}  // namespace

void MethodAdapter::probe() const {
  VideoClip video{"probe", {}};
  MaskSequence mask;
  mask.id = "probe";
  for (int t = 0; t < 3; ++t) {
    RgbFrame f(16, 16);
    for (int y = 0; y < 16; ++y) {
      for (int x = 0; x < 16; ++x) {
        for (int c = 0; c < 3; ++c) f(y, x, c) = static_cast<std::uint8_t>((x * 16 + y * 3 + c * 40 + t) % 256);
      }
    }
    video.frames.push_back(f);
    MaskFrame m = MaskFrame::Zero(16, 16);
    m.block(4, 4 + t, 6, 6).setOnes();
    mask.frames.push_back(m);
  }
  VideoClip corrupted = video;
  for (std::size_t t = 0; t < corrupted.frames.size(); ++t) {
    for (int y = 0; y < 16; ++y) {
      for (int x = 0; x < 16; ++x) {
        if (mask.frames[t](y, x)) {
          for (int c = 0; c < 3; ++c) corrupted.frames[t](y, x, c) = 0;
        }
      }
    }
  }
  check_prediction(run({corrupted, mask, &video}), corrupted, name());
}

CallableAdapter::CallableAdapter(std::string name, std::string version, Fn fn, ResolutionConstraint constraint)
    : name_(std::move(name)), version_(std::move(version)), fn_(std::move(fn)), constraint_(constraint) {
  if (!fn_) throw PreconditionError("adapter '" + name_ + "' has no callable");
}

MethodAdapterPtr identity_adapter() {
  return std::make_shared<CallableAdapter>("identity", "1", [](const AdapterRequest& r) { return r.corrupted; });
}

MethodAdapterPtr oracle_adapter() {
  return std::make_shared<CallableAdapter>("oracle", "1", [](const AdapterRequest& r) {
    if (!r.reference) throw PreconditionError("oracle adapter needs the reference video");
    return *r.reference;
  });
}

SubprocessAdapter::SubprocessAdapter(std::string name, std::vector<std::string> command,
                                     std::filesystem::path work_root, ResolutionConstraint constraint)
    : name_(std::move(name)), command_(std::move(command)), work_root_(std::move(work_root)), constraint_(constraint) {
  if (command_.empty()) throw PreconditionError("adapter '" + name_ + "' has an empty command");
}

std::string SubprocessAdapter::fingerprint() const {
  features::Sha256 h;
  h.update(name_);
  for (const auto& a : command_) h.update(std::string_view("\0", 1)).update(a);
  if (std::filesystem::is_regular_file(command_.front())) h.update(features::sha256_file(command_.front()));
  return name_ + "@" + h.hex().substr(0, 16);
}

VideoClip SubprocessAdapter::run(const AdapterRequest& request) const {
  static std::atomic<std::uint64_t> counter{0};
  const auto dir = work_root_ / (name_ + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  std::filesystem::remove_all(dir);
  const auto input = dir / "input", mask = dir / "mask", output = dir / "output";
  write_frame_dir(request.corrupted.frames, input);
  write_mask_dir(request.mask.frames, mask);
  std::filesystem::create_directories(output);
  std::vector<std::string> argv;
  for (const auto& a : command_) {
    argv.push_back(substitute(substitute(substitute(a, "{input}", input.string()), "{mask}", mask.string()),
                              "{output}", output.string()));
  }
  const int status = spawn_and_wait(argv);
  if (status != 0) {
    throw Error("method '" + name_ + "' exited with status " + std::to_string(status) + " (work dir " +
                dir.string() + ")");
  }
  VideoClip pred{request.corrupted.id, read_frame_dir(output)};
  check_prediction(pred, request.corrupted, name_);
  std::filesystem::remove_all(dir);
  return pred;
}

MethodAdapterPtr open_adapter(const std::string& ref, const std::filesystem::path& work_root) {
  if (ref == "identity") return identity_adapter();
  if (ref == "oracle") return oracle_adapter();
  std::ifstream in(ref);
  if (!in) throw LoadError("cannot open adapter description " + ref);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(ref + ": " + e.what());
  }
  if (!j.contains("name") || !j["name"].is_string()) throw ParseError("missing field", 0, "adapter.name");
  if (!j.contains("command") || !j["command"].is_array() || j["command"].empty()) {
    throw ParseError("missing or empty field", 0, "adapter.command");
  }
  auto command = j["command"].get<std::vector<std::string>>();
  const std::filesystem::path exe(command.front());
  if (exe.is_relative() && exe.has_parent_path()) {
    command.front() = (std::filesystem::path(ref).parent_path() / exe).string();
  }
  ResolutionConstraint constraint;
  constraint.pad_multiple = j.value("pad_multiple", 1);
  if (constraint.pad_multiple < 1) throw ParseError("must be positive", 0, "adapter.pad_multiple");
  return std::make_shared<SubprocessAdapter>(j["name"].get<std::string>(), std::move(command), work_root, constraint);
}

}  // namespace vibench::harness
