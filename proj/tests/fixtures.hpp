#pragma once

#include <grassqp/postnikov.hpp>

namespace grassqp::testing {

// The (3,7) diagram whose quiver has six internal regions 267, 126, 256,
// 125, 356, 235 and boundary ring 671, 712, 123, 234, 345, 456, 567.
// Vertices: 267=1, 126=2, 256=3, 125=4, 356=5, 235=6; frozen 671=7 .. 567=13.
inline FaceDiagram gr37_example_diagram()
{
    FaceDiagram fd;
    fd.k = 3;
    fd.n = 7;
    fd.quiver = IcedQuiver(6, 7,
                           {
                               {0, 7, 1},   // 671->267
                               {1, 1, 13},  // 267->567
                               {2, 1, 2},   // 267->126
                               {3, 2, 8},   // 126->712
                               {4, 4, 2},   // 125->126
                               {5, 9, 4},   // 123->125
                               {6, 2, 3},   // 126->256
                               {7, 3, 1},   // 256->267
                               {8, 3, 4},   // 256->125
                               {9, 3, 5},   // 256->356
                               {10, 13, 3}, // 567->256
                               {11, 5, 12}, // 356->456
                               {12, 5, 6},  // 356->235
                               {13, 6, 3},  // 235->256
                               {14, 4, 6},  // 125->235
                               {15, 6, 11}, // 235->345
                               {16, 11, 5}, // 345->356
                               {17, 10, 6}, // 234->235
                               {18, 6, 9},  // 235->123
                               {19, 8, 9},  // 712->123   external
                               {20, 9, 10}, // 123->234   external
                               {21, 12, 13},// 456->567   external
                               {22, 13, 7}, // 567->671   external
                               {23, 8, 7},  // 712->671   external
                               {24, 11, 10},// 345->234   external
                               {25, 12, 11} // 456->345   external
                           });
    auto add = [&](std::vector<int> arrows, FaceTag tag) {
        DiagramFace f;
        f.arrows = std::move(arrows);
        f.tag = tag;
        fd.faces.push_back(std::move(f));
    };
    add({2, 6, 7}, FaceTag::CW);
    add({4, 6, 8}, FaceTag::ACW);
    add({9, 12, 13}, FaceTag::ACW);
    add({14, 13, 8}, FaceTag::CW);
    add({1, 10, 7}, FaceTag::ACW);
    add({15, 16, 12}, FaceTag::CW);
    add({5, 14, 18}, FaceTag::ACW);
    add({22, 0, 1}, FaceTag::CW);
    add({23, 0, 2, 3}, FaceTag::ACW);
    add({19, 5, 4, 3}, FaceTag::CW);
    add({20, 17, 18}, FaceTag::CW);
    add({24, 17, 15}, FaceTag::ACW);
    add({25, 16, 11}, FaceTag::ACW);
    add({21, 10, 9, 11}, FaceTag::CW);
    fd.marker_external = {22, 23, 19, 20, 24, 25, 21};
    return fd;
}

} // namespace grassqp::testing
