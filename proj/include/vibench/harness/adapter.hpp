#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "vibench/core/image.hpp"

namespace vibench::harness {

/// Input sizes a method accepts. Inputs are mirror-padded to the next
/// multiple of `pad_multiple` before the call and cropped afterwards.
struct ResolutionConstraint {
  int pad_multiple = 1;
};

/// What an adapter sees for one pair. `reference` is the uncorrupted video
/// at the same (padded) size; only diagnostic adapters may read it.
struct AdapterRequest {
  const VideoClip& corrupted;
  const MaskSequence& mask;
  const VideoClip* reference = nullptr;
};

/// An inpainting method. run() must return a prediction with the length and
/// dimensions of the corrupted input, or throw.
class MethodAdapter {
 public:
  virtual ~MethodAdapter() = default;

  virtual std::string name() const = 0;
  /// Identifies the method implementation; part of the rerun cache key.
  virtual std::string fingerprint() const = 0;
  virtual ResolutionConstraint constraint() const { return {}; }
  virtual VideoClip run(const AdapterRequest& request) const = 0;

  /// Runs the method on a small synthetic pair and checks the output shape.
  /// Throws on failure.
  void probe() const;
};

using MethodAdapterPtr = std::shared_ptr<const MethodAdapter>;

/// Library-level method registered as a callable.
class CallableAdapter final : public MethodAdapter {
 public:
  using Fn = std::function<VideoClip(const AdapterRequest&)>;

  CallableAdapter(std::string name, std::string version, Fn fn, ResolutionConstraint constraint = {});

  std::string name() const override { return name_; }
  std::string fingerprint() const override { return name_ + "@" + version_; }
  ResolutionConstraint constraint() const override { return constraint_; }
  VideoClip run(const AdapterRequest& request) const override { return fn_(request); }

 private:
  std::string name_;
  std::string version_;
  Fn fn_;
  ResolutionConstraint constraint_;
};

/// Returns the corrupted input unchanged.
MethodAdapterPtr identity_adapter();
/// Returns the reference video (a perfect reconstruction).
MethodAdapterPtr oracle_adapter();

/// External method run as a child process.
///
/// For each call a fresh work directory holds input/ (corrupted RGB frames)
/// and mask/ (0/255 PNG masks), both named %05d.png from 00000. The command
/// template's "{input}", "{mask}" and "{output}" tokens are replaced with
/// those directories; the child writes the same number of equally sized
/// frames into output/. A nonzero exit status is a failure.
class SubprocessAdapter final : public MethodAdapter {
 public:
  SubprocessAdapter(std::string name, std::vector<std::string> command, std::filesystem::path work_root,
                    ResolutionConstraint constraint = {});

  std::string name() const override { return name_; }
  std::string fingerprint() const override;
  ResolutionConstraint constraint() const override { return constraint_; }
  VideoClip run(const AdapterRequest& request) const override;

 private:
  std::string name_;
  std::vector<std::string> command_;
  std::filesystem::path work_root_;
  ResolutionConstraint constraint_;
};

/// "identity", "oracle", or a JSON file {"name", "command": [...],
/// "pad_multiple"} describing a SubprocessAdapter whose relative executable
/// path resolves against the file's directory.
MethodAdapterPtr open_adapter(const std::string& ref, const std::filesystem::path& work_root);

}  // namespace vibench::harness
