// Database inspector: renders the tracklets payload as the same table the
// service's CLI prints, including the compact trajectory strings.

import type { AudioInfo, DatabaseDoc, TrackletDoc, TrajectoryPoint } from "./types.js";

export const COLUMNS = ["ID", "Category", "Appearance", "Motion", "Trajectory", "Audio"] as const;

export const MISSING = "N/A";

// Round half to even, matching the service's display rounding.
function roundHalfEven(value: number): number {
  const floor = Math.floor(value);
  if (Math.abs(value - floor - 0.5) < 1e-9) {
    return floor % 2 === 0 ? floor : floor + 1;
  }
  return Math.round(value);
}

export function formatSeconds(t: number): string {
  const tenths = roundHalfEven(t * 10);
  if (tenths % 10 === 0) return String(tenths / 10);
  return (tenths / 10).toFixed(1);
}

function formatBbox(bbox: [number, number, number, number]): string {
  const [x1, y1, x2, y2] = bbox.map(roundHalfEven);
  return `(${x1},${y1},${x2},${y2})`;
}

function nearest(points: TrajectoryPoint[], tick: number): TrajectoryPoint {
  let best = points[0];
  for (const point of points) {
    if (Math.abs(point.t - tick) < Math.abs(best.t - tick)) {
      best = point;
    }
  }
  return best;
}

export function compactTrajectory(points: TrajectoryPoint[], strideS = 1.0): string | null {
  if (points.length === 0) return null;
  const picked: TrajectoryPoint[] = [];
  const last = points[points.length - 1].t;
  for (let tick = points[0].t; tick <= last + 1e-9; tick += strideS) {
    const point = nearest(points, tick);
    if (picked.length === 0 || picked[picked.length - 1].frame !== point.frame) {
      picked.push(point);
    }
  }
  return picked
    .map((p) => `at ${formatSeconds(p.t)} s, ${formatBbox(p.bbox)}`)
    .join("; ");
}

export function motionCell(tracklet: TrackletDoc): string {
  return tracklet.motion
    .map((seg) => `From ${formatSeconds(seg.start_s)} to ${formatSeconds(seg.end_s)} s, ${seg.caption}`)
    .join("; ");
}

export function audioCell(audio: AudioInfo | null): string | null {
  if (audio === null) return null;
  let text = audio.category;
  if (audio.transcript) text += `: "${audio.transcript}"`;
  if (audio.emotion) text += ` (${audio.emotion})`;
  return text;
}

export function tableRows(doc: DatabaseDoc, strideS = 1.0): string[][] {
  return [...doc.tracklets]
    .sort((a, b) => a.id - b.id)
    .map((tracklet) => [
      String(tracklet.id),
      tracklet.category,
      tracklet.appearance,
      motionCell(tracklet),
      compactTrajectory(tracklet.trajectory, strideS) ?? MISSING,
      audioCell(tracklet.audio) ?? MISSING,
    ]);
}

export function escapeHtml(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}

export function renderInspectorHTML(doc: DatabaseDoc, strideS = 1.0): string {
  const head = COLUMNS.map((c) => `<th>${c}</th>`).join("");
  const body = tableRows(doc, strideS)
    .map((row) => `<tr>${row.map((cell) => `<td>${escapeHtml(cell)}</td>`).join("")}</tr>`)
    .join("");
  return `<table class="inspector"><thead><tr>${head}</tr></thead><tbody>${body}</tbody></table>`;
}

export function renderEmptyStateHTML(message: string): string {
  return `<p class="empty-state">${escapeHtml(message)}</p>`;
}
