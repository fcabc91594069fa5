import { describe, expect, it } from "vitest";

import {
  codePoints,
  escapeHtml,
  segmentText,
  segmentsToHtml,
  utf16ToCodePointOffset,
} from "../src/segments.js";

describe("code point handling", () => {
  it("astral characters count once", () => {
    const text = "a\u{1F600}b"; // 3 code points, 4 UTF-16 units
    expect(codePoints(text)).toHaveLength(3);
    expect(utf16ToCodePointOffset(text, 0)).toBe(0);
    expect(utf16ToCodePointOffset(text, 1)).toBe(1);
    expect(utf16ToCodePointOffset(text, 3)).toBe(2);
    expect(utf16ToCodePointOffset(text, 4)).toBe(3);
  });

  it("segments slice by code points, matching server offsets", () => {
    const text = "x\u{1F600}yz";
    const segments = segmentText(text, [{ span: [1, 3], className: "hl" }]);
    expect(segments.map((s) => [s.text, s.classes])).toEqual([
      ["x", []],
      ["\u{1F600}y", ["hl"]],
      ["z", []],
    ]);
  });
});

describe("segmentText", () => {
  it("no layers yields one bare segment", () => {
    expect(segmentText("hello", [])).toEqual([
      { start: 0, end: 5, text: "hello", classes: [] },
    ]);
  });

  it("overlapping layers stack class names", () => {
    const segments = segmentText("abcdef", [
      { span: [0, 4], className: "one" },
      { span: [2, 6], className: "two" },
    ]);
    expect(segments.map((s) => [s.text, s.classes])).toEqual([
      ["ab", ["one"]],
      ["cd", ["one", "two"]],
      ["ef", ["two"]],
    ]);
  });

  it("out-of-range spans are clamped", () => {
    const segments = segmentText("abc", [{ span: [2, 99], className: "x" }]);
    expect(segments.map((s) => [s.text, s.classes])).toEqual([
      ["ab", []],
      ["c", ["x"]],
    ]);
  });

  it("empty text yields no segments", () => {
    expect(segmentText("", [{ span: [0, 1], className: "x" }])).toEqual([]);
  });
});

describe("html output", () => {
  it("escapes markup-significant characters", () => {
    expect(escapeHtml('<a href="x">&</a>')).toBe("&lt;a href=&quot;x&quot;&gt;&amp;&lt;/a&gt;");
  });

  it("wraps only styled segments", () => {
    const html = segmentsToHtml(segmentText("abcd", [{ span: [1, 3], className: "hl" }]));
    expect(html).toBe('a<span class="hl" data-start="1" data-end="3">bc</span>d');
  });
});
