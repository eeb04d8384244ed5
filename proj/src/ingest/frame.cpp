#include "footfall/ingest/frame.hpp"

#include <algorithm>

namespace footfall::ingest {

DetectionFrame filter_confidence(DetectionFrame frame, double threshold) {
  std::erase_if(frame.detections,
                [threshold](const Detection& d) { return d.confidence < threshold; });
  return frame;
}

}  // namespace footfall::ingest
