// Trajectory-driven bounding-box overlays, computed client-side from the
// tracklets payload. A box is drawn only when a stored trajectory point lies
// within half a frame duration of the current playback time.

import type { DatabaseDoc, TrackletDoc, TrajectoryPoint } from "./types.js";

export type OverlayBox = {
  id: number;
  label: string;
  x: number;
  y: number;
  width: number;
  height: number;
  color: string;
};

export const PALETTE = [
  "#e6194b", "#3cb44b", "#4363d8", "#f58231",
  "#911eb4", "#46f0f0", "#f032e6", "#bcf60c",
];

export function colorForId(id: number): string {
  return PALETTE[((id % PALETTE.length) + PALETTE.length) % PALETTE.length];
}

function nearestPoint(points: TrajectoryPoint[], timeS: number): TrajectoryPoint {
  let best = points[0];
  for (const point of points) {
    if (Math.abs(point.t - timeS) < Math.abs(best.t - timeS)) {
      best = point;
    }
  }
  return best;
}

export function computeOverlayBoxes(
  doc: DatabaseDoc,
  timeS: number,
  viewportWidth: number,
  viewportHeight: number,
  visibleIds?: Iterable<number> | null,
): OverlayBox[] {
  const video = doc.video;
  const halfFrame = 0.5 / video.fps;
  const filter = visibleIds == null ? null : new Set(visibleIds);
  const scaleX = viewportWidth / video.width;
  const scaleY = viewportHeight / video.height;

  const boxes: OverlayBox[] = [];
  for (const tracklet of doc.tracklets) {
    if (tracklet.trajectory.length === 0) continue; // environment record
    if (filter !== null && !filter.has(tracklet.id)) continue;
    const point = nearestPoint(tracklet.trajectory, timeS);
    if (Math.abs(point.t - timeS) > halfFrame + 1e-9) continue;
    const [x1, y1, x2, y2] = point.bbox;
    boxes.push({
      id: tracklet.id,
      label: `${tracklet.id}:${tracklet.category}`,
      x: x1 * scaleX,
      y: y1 * scaleY,
      width: (x2 - x1) * scaleX,
      height: (y2 - y1) * scaleY,
      color: colorForId(tracklet.id),
    });
  }
  return boxes;
}

export function trackletById(doc: DatabaseDoc, id: number): TrackletDoc | undefined {
  return doc.tracklets.find((t) => t.id === id);
}

export function drawOverlay(
  ctx: CanvasRenderingContext2D,
  boxes: OverlayBox[],
  width: number,
  height: number,
): void {
  ctx.clearRect(0, 0, width, height);
  ctx.lineWidth = 2;
  ctx.font = "13px sans-serif";
  for (const box of boxes) {
    ctx.strokeStyle = box.color;
    ctx.strokeRect(box.x, box.y, box.width, box.height);
    const textWidth = ctx.measureText(box.label).width;
    ctx.fillStyle = box.color;
    ctx.fillRect(box.x, Math.max(0, box.y - 16), textWidth + 8, 16);
    ctx.fillStyle = "#fff";
    ctx.fillText(box.label, box.x + 4, Math.max(12, box.y - 4));
  }
}
