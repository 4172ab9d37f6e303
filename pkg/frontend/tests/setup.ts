// happy-dom reports every iframe load as a page error once iframe loading
// is disabled; that is the environment working as configured, not a
// failure. The report bypasses the wrapped test console, so filter the
// worker's stderr stream for exactly that message and nothing else.

const write = process.stderr.write.bind(process.stderr);
process.stderr.write = ((chunk: string | Uint8Array, ...rest: unknown[]) => {
  const text = typeof chunk === "string" ? chunk : Buffer.from(chunk).toString();
  if (text.includes("Iframe page loading is disabled")) return true;
  return (write as (...args: unknown[]) => boolean)(chunk, ...rest);
}) as typeof process.stderr.write;
