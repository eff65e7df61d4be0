import { describe, expect, it } from "vitest";

import {
  audioCell,
  compactTrajectory,
  formatSeconds,
  MISSING,
  renderEmptyStateHTML,
  renderInspectorHTML,
  tableRows,
} from "../src/inspector.js";
import type { DatabaseDoc } from "../src/types.js";
import classroomJson from "./fixtures/classroom.tracklets.json";
import motorcycleJson from "./fixtures/motorcycle.tracklets.json";

const MOTORCYCLE = motorcycleJson as unknown as DatabaseDoc;
const CLASSROOM = classroomJson as unknown as DatabaseDoc;

describe("tableRows", () => {
  it("reproduces the service's inspector rows for the motorcycle video", () => {
    expect(tableRows(MOTORCYCLE)).toEqual([
      [
        "0",
        "environment",
        "road and mountains",
        "From 0 to 7 s, a motorcyclist riding on the road in the mountains",
        "N/A",
        "engine",
      ],
      [
        "1",
        "motorcycle",
        "orange in color",
        "From 0 to 7 s, a man riding a motorcycle down a road",
        "at 0 s, (198,198,294,277); at 1 s, (208,198,304,277); " +
          "at 2 s, (218,198,314,277); at 3 s, (228,198,324,277); " +
          "at 4 s, (238,198,334,277); at 5 s, (248,198,344,277); " +
          "at 6 s, (258,198,354,277)",
        "N/A",
      ],
      [
        "2",
        "person",
        "wearing a black leather jacket and a black helmet",
        "From 0 to 7 s, the person is a motorcyclist on a motorcycle in the mountains",
        "at 0 s, (222,176,279,259); at 1 s, (232,176,289,259); " +
          "at 2 s, (242,176,299,259); at 3 s, (252,176,309,259); " +
          "at 4 s, (262,176,319,259); at 5 s, (272,176,329,259); " +
          "at 6 s, (282,176,339,259)",
        "N/A",
      ],
    ]);
  });

  it("reproduces the classroom rows, including speech audio", () => {
    const rows = tableRows(CLASSROOM);
    expect(rows).toHaveLength(4);
    expect(rows[0][5]).toBe(
      'speech: "today we are going to review the last lesson" (neutral)');
    expect(rows[0][3]).toBe(
      "From 0 to 1.1 s, a woman is sitting in the room; " +
        "From 1.1 to 2 s, a woman is sitting in the room");
    expect(rows[3]).toEqual([
      "3",
      "tv",
      "tv black screen",
      "From 0 to 1.2 s, the tv is on a black background",
      "at 0 s, (338,133,406,181); at 1 s, (338,133,406,181)",
      "N/A",
    ]);
  });

  it("sorts rows by record id", () => {
    const shuffled: DatabaseDoc = {
      ...MOTORCYCLE,
      tracklets: [...MOTORCYCLE.tracklets].reverse(),
    };
    expect(tableRows(shuffled).map((row) => row[0])).toEqual(["0", "1", "2"]);
  });
});

describe("formatSeconds", () => {
  it("drops the fraction for whole seconds", () => {
    expect(formatSeconds(7)).toBe("7");
    expect(formatSeconds(0)).toBe("0");
    expect(formatSeconds(1.0)).toBe("1");
  });

  it("rounds to tenths, half to even", () => {
    expect(formatSeconds(32 / 30)).toBe("1.1");
    expect(formatSeconds(35 / 30)).toBe("1.2");
    expect(formatSeconds(1.25)).toBe("1.2");
    expect(formatSeconds(6.8)).toBe("6.8");
  });
});

describe("compactTrajectory", () => {
  it("returns null for an empty trajectory", () => {
    expect(compactTrajectory([])).toBeNull();
  });

  it("keeps a lone point", () => {
    expect(compactTrajectory([{ frame: 0, t: 0, bbox: [1, 2, 3, 4] }]))
      .toBe("at 0 s, (1,2,3,4)");
  });

  it("samples roughly one point per stride", () => {
    const points = MOTORCYCLE.tracklets[1].trajectory;
    const cell = compactTrajectory(points, 2.0);
    expect(cell).toBe(
      "at 0 s, (198,198,294,277); at 2 s, (218,198,314,277); " +
        "at 4 s, (238,198,334,277); at 6 s, (258,198,354,277)");
  });
});

describe("audioCell", () => {
  it("formats the three audio shapes", () => {
    expect(audioCell({ category: "engine", transcript: "", emotion: null }))
      .toBe("engine");
    expect(audioCell({
      category: "speech",
      transcript: "today we are going to review the last lesson",
      emotion: "neutral",
    })).toBe('speech: "today we are going to review the last lesson" (neutral)');
    expect(audioCell(null)).toBeNull();
  });
});

describe("HTML rendering", () => {
  it("renders a table with headers and cell text", () => {
    const html = renderInspectorHTML(MOTORCYCLE);
    expect(html).toContain('<table class="inspector">');
    for (const header of ["ID", "Category", "Appearance", "Motion", "Trajectory", "Audio"]) {
      expect(html).toContain(`<th>${header}</th>`);
    }
    expect(html).toContain("<td>orange in color</td>");
    expect(html).toContain(`<td>${MISSING}</td>`);
  });

  it("escapes markup in cell text", () => {
    const doc: DatabaseDoc = {
      version: 1,
      video: MOTORCYCLE.video,
      tracklets: [{
        id: 1,
        category: "sign",
        appearance: '<b>"café" & more</b>',
        motion: [],
        trajectory: [],
        audio: null,
      }],
    };
    const html = renderInspectorHTML(doc);
    expect(html).toContain("&lt;b&gt;&quot;café&quot; &amp; more&lt;/b&gt;");
    expect(html).not.toContain("<b>");
  });

  it("renders the empty state with escaping", () => {
    expect(renderEmptyStateHTML("nothing <here>"))
      .toBe('<p class="empty-state">nothing &lt;here&gt;</p>');
  });
});
