// Wire types for the service's v1 API.

export type VideoMeta = {
  video_id: string;
  path: string;
  fps: number;
  width: number;
  height: number;
  num_frames: number;
  duration_s: number;
};

export type MotionSegment = { start_s: number; end_s: number; caption: string };

export type TrajectoryPoint = {
  frame: number;
  t: number;
  bbox: [number, number, number, number];
};

export type AudioInfo = {
  category: string;
  transcript: string | null;
  emotion: string | null;
};

export type TrackletDoc = {
  id: number;
  category: string;
  appearance: string;
  motion: MotionSegment[];
  trajectory: TrajectoryPoint[];
  audio: AudioInfo | null;
};

export type DatabaseDoc = {
  version: number;
  video: VideoMeta;
  tracklets: TrackletDoc[];
};

export type Cell = number | string | null;

export type QueryResponse = {
  query: string;
  columns: string[];
  rows: Cell[][];
  record_ids: (number | null)[];
};

export type SessionInfo = { session_id: string; video_id: string };

export type TurnDoc = {
  question: string;
  answer: string;
  query: string | null;
  backend: string | null;
  error: { kind: string } | null;
  columns: string[];
  rows: Cell[][];
  record_ids: (number | null)[];
};

export type HistoryDoc = {
  session_id: string;
  video_id: string;
  turns: TurnDoc[];
};
